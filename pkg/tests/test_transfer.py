import itertools

import numpy as np
import pytest

from lutfilter.core import lattice_value
from lutfilter.interp import interp_4d
from lutfilter.transfer import (
    build_full_lut,
    cache_clipped_lut,
    clipped_vs_full_report,
    identity_oracle,
    make_affine_oracle,
    make_dump_oracle,
    mean_oracle,
)


def test_cache_identity():
    lut = cache_clipped_lut(identity_oracle)
    for b0 in range(17):
        assert lut.values[b0, 0, 5, 16] == lattice_value(b0)


def test_cache_mean_entry():
    lut = cache_clipped_lut(mean_oracle)
    # entry (4, 6, 0, 0): round((64 + 96) / 4) = 40
    assert lut.values[4, 6, 0, 0] == 40
    # independent recomputation on a sample of entries
    rng = np.random.default_rng(5)
    for _ in range(200):
        b = tuple(rng.integers(0, 17, 4))
        expected = round(sum(lattice_value(i) for i in b) / 4)
        assert abs(int(lut.values[b]) - expected) <= 1  # banker's vs half-up


def test_cache_affine_saturates():
    lut = cache_clipped_lut(make_affine_oracle((1, 0, 0, 0), 1))
    for b0 in range(17):
        assert lut.values[b0, 2, 3, 4] == min(lattice_value(b0) + 1, 255)


def test_cache_rejects_out_of_range_oracle():
    with pytest.raises(ValueError):
        cache_clipped_lut(lambda a, b, c, d: 256)


def test_cache_deterministic():
    a = cache_clipped_lut(mean_oracle)
    b = cache_clipped_lut(mean_oracle)
    assert np.array_equal(a.values, b.values)


def test_cached_lut_agrees_with_oracle_on_lattice():
    lut = cache_clipped_lut(mean_oracle)
    lattice = [lattice_value(b) for b in range(17)]
    for b in itertools.product((0, 7, 15, 16), repeat=4):
        q = tuple(lattice[i] for i in b)
        assert interp_4d(lut, q) == mean_oracle(*q)


def test_full_lut_identity_bit_depth_4():
    full = build_full_lut(identity_oracle, 4)
    assert full.values.size == 65536
    for i in range(16):
        assert full.values[i, 3, 7, 15] == i * 17


def test_full_lut_mean_bit_depth_2():
    full = build_full_lut(mean_oracle, 2)
    assert full.values.size == 256
    for idx in itertools.product(range(4), repeat=4):
        samples = [round(i * 255 / 3) for i in idx]
        assert full.values[idx] == (sum(samples) + 2) // 4


def test_full_lut_guard():
    with pytest.raises(ValueError):
        build_full_lut(identity_oracle, 8)


def test_report_identity_exact():
    rep = clipped_vs_full_report(identity_oracle, 2, 2, 4)
    assert rep.max_abs == 0
    assert rep.mean_abs == 0.0


def test_report_affine_within_rounding():
    rep = clipped_vs_full_report(make_affine_oracle((0.25, 0.25, 0.25, 0.25)), 2, 2, 4)
    assert rep.max_abs <= 1


def test_report_clamp_heavy_is_measured_not_asserted():
    rep = clipped_vs_full_report(lambda a, b, c, d: min(a + b, 255), 2, 2, 4)
    assert rep.n_inputs == 65536
    assert rep.mean_abs >= 0.0


def test_report_requires_consistent_split():
    with pytest.raises(ValueError):
        clipped_vs_full_report(identity_oracle, 3, 2, 4)


def test_dump_oracle_round_trip():
    lut = cache_clipped_lut(mean_oracle)
    oracle = make_dump_oracle(lut.values)
    assert oracle(64, 96, 0, 0) == 40
    with pytest.raises(ValueError):
        oracle(65, 0, 0, 0)
    rebuilt = cache_clipped_lut(oracle)
    assert np.array_equal(rebuilt.values, lut.values)
