import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lutfilter.core import ClippedLut, lattice_value
from lutfilter.interp import interp_2d, interp_4d, simplex_case, split_msb_lsb
from lutfilter.transfer import cache_clipped_lut, make_affine_oracle

LSB = st.integers(min_value=0, max_value=15)
SAMPLE = st.integers(min_value=0, max_value=255)


def test_split_msb_lsb_worked_values():
    assert split_msb_lsb(74) == (4, 10)
    assert split_msb_lsb(98) == (6, 2)
    assert split_msb_lsb(0) == (0, 0)


@given(SAMPLE)
def test_split_recombines(v):
    msb, lsb = split_msb_lsb(v)
    assert v == 16 * msb + lsb
    assert 0 <= msb <= 15 and 0 <= lsb <= 15


def test_split_rejects_out_of_range():
    with pytest.raises(ValueError):
        split_msb_lsb(256)
    with pytest.raises(ValueError):
        split_msb_lsb(-1)


# --- 2D triangle interpolation -------------------------------------------

def test_interp_2d_worked_example_vertices_and_weights():
    # (74, 98): Lx=10 > Ly=2 picks P10; weights (w0, w1, w2) = (2, 8, 6).
    # Verified through a table that isolates each vertex.
    for vertex, expected_weight in [((5, 7), 2), ((5, 6), 8), ((4, 6), 6)]:
        table = np.zeros((17, 17), dtype=np.int64)
        table[vertex] = 16
        assert interp_2d(table, 74, 98) == expected_weight
    # The unused triangle vertex gets zero weight.
    table = np.zeros((17, 17), dtype=np.int64)
    table[4, 7] = 16
    assert interp_2d(table, 74, 98) == 0


def test_interp_2d_linear_reproduction():
    table = [[min(16 * i, 255) for j in range(17)] for i in range(17)]
    assert interp_2d(table, 74, 98) == 74


def test_interp_2d_exact_on_lattice():
    rng = np.random.default_rng(7)
    table = rng.integers(0, 256, (17, 17))
    for a in range(16):
        for b in range(16):
            assert interp_2d(table, 16 * a, 16 * b) == table[a, b]
    assert interp_2d(table, 255, 255) == table[16, 16]


# --- simplex case selection ----------------------------------------------

def brute_force_case(lsb):
    """Enumerate all 24 orderings; pick the valid one under the tie-break."""
    best = None
    for perm in itertools.permutations(range(4)):
        lo = [lsb[d] for d in perm]
        if lo != sorted(lo, reverse=True):
            continue
        weights = (16 - lo[0], lo[0] - lo[1], lo[1] - lo[2], lo[2] - lo[3], lo[3])
        if any(w < 0 for w in weights):
            continue
        if best is None or perm < best[0]:
            best = (perm, weights)
    return best


def test_simplex_case_examples():
    assert simplex_case((0, 0, 0, 0)).weights == (16, 0, 0, 0, 0)
    case = simplex_case((10, 2, 0, 0))
    assert case.order[:2] == (0, 1)
    assert case.weights == (6, 8, 2, 0, 0)
    assert simplex_case((5, 5, 5, 5)).weights == (11, 0, 0, 0, 5)
    assert simplex_case((5, 5, 5, 5)).order == (0, 1, 2, 3)


@given(st.tuples(LSB, LSB, LSB, LSB))
def test_simplex_case_matches_brute_force(lsb):
    case = simplex_case(lsb)
    perm, weights = brute_force_case(lsb)
    assert case.order == perm
    assert case.weights == weights


@given(st.tuples(LSB, LSB, LSB, LSB))
def test_simplex_case_invariants(lsb):
    case = simplex_case(lsb)
    assert sum(case.weights) == 16
    assert all(w >= 0 for w in case.weights)
    # nested chain of corners
    assert case.vertex_offsets[0] == (0, 0, 0, 0)
    assert sum(case.vertex_offsets[-1]) == 4
    for a, b in zip(case.vertex_offsets, case.vertex_offsets[1:]):
        assert sum(b) == sum(a) + 1
        assert all(x <= y for x, y in zip(a, b))
    # per-dimension upper-vertex weight equals that dimension's LSB
    for d in range(4):
        upper = sum(
            w for w, off in zip(case.weights, case.vertex_offsets) if off[d] == 1
        )
        assert upper == lsb[d]


def test_simplex_case_rejects_bad_input():
    with pytest.raises(ValueError):
        simplex_case((16, 0, 0, 0))
    with pytest.raises(ValueError):
        simplex_case((0, 0, 0))


# --- 4D retrieval ---------------------------------------------------------

def test_lattice_exactness_random_lut(rng):
    values = rng.integers(0, 256, (17,) * 4, dtype=np.uint8)
    lut = ClippedLut(values=values)
    lattice = [lattice_value(b) for b in range(17)]
    for b in itertools.product((0, 3, 15, 16), repeat=4):
        q = tuple(lattice[i] for i in b)
        assert interp_4d(lut, q) == values[b]


def test_linear_oracle_reproduction(rng):
    lut = cache_clipped_lut(make_affine_oracle((1, 0, 0, 0)))
    assert interp_4d(lut, (74, 98, 3, 251)) == 74
    for _ in range(1000):
        q = tuple(int(v) for v in rng.integers(0, 256, 4))
        assert interp_4d(lut, q) == q[0]


def test_affine_exactness_within_rounding(rng):
    oracle = make_affine_oracle((0.3, 0.3, 0.2, 0.2), 1.5)
    lut = cache_clipped_lut(oracle)
    for _ in range(2000):
        q = tuple(int(v) for v in rng.integers(0, 256, 4))
        assert abs(interp_4d(lut, q) - oracle(*q)) <= 1


@settings(max_examples=200)
@given(st.tuples(SAMPLE, SAMPLE, SAMPLE, SAMPLE))
def test_interp_4d_monotone_in_table(q):
    rng = np.random.default_rng(hash(q) & 0xFFFF)
    lo = rng.integers(0, 250, (17,) * 4).astype(np.uint8)
    hi = (lo + rng.integers(0, 6, (17,) * 4)).astype(np.uint8)
    assert interp_4d(ClippedLut(values=hi), q) >= interp_4d(ClippedLut(values=lo), q)


@given(st.tuples(SAMPLE, SAMPLE, SAMPLE, SAMPLE))
def test_interp_4d_range_and_determinism(q):
    rng = np.random.default_rng(1234)
    lut = ClippedLut(values=rng.integers(0, 256, (17,) * 4, dtype=np.uint8))
    out = interp_4d(lut, q)
    assert 0 <= out <= 255
    assert out == interp_4d(lut, q)
