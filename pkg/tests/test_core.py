import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lutfilter.core import (
    LUT_BYTES,
    ClippedLut,
    LutSet,
    PatternGeometry,
    StageSpec,
    default_pattern,
    lattice_value,
    preset,
    renormalize_weights,
    storage_bytes,
)


def test_lattice_values():
    assert lattice_value(0) == 0
    assert lattice_value(15) == 240
    assert lattice_value(16) == 255
    values = [lattice_value(b) for b in range(17)]
    assert values == sorted(values)
    assert values == [0, 16, 32, 48, 64, 80, 96, 112, 128, 144, 160, 176, 192, 208, 224, 240, 255]
    with pytest.raises(ValueError):
        lattice_value(17)
    with pytest.raises(ValueError):
        lattice_value(-1)


def test_single_lut_storage():
    lut = ClippedLut(values=np.zeros(LUT_BYTES, dtype=np.uint8))
    assert lut.storage_bytes() == 83521
    assert lut.values.shape == (17, 17, 17, 17)
    with pytest.raises(ValueError):
        ClippedLut(values=np.zeros(100, dtype=np.uint8))


@pytest.mark.parametrize(
    "name,patterns_per_stage,lut_count,total_bytes",
    [("U", 1, 2, 167042), ("V", 3, 6, 501126), ("F", 7, 14, 1169294)],
)
def test_presets(name, patterns_per_stage, lut_count, total_bytes):
    pre = preset(name)
    assert len(pre.stages) == 2
    for stage in pre.stages:
        assert len(stage.patterns) == patterns_per_stage
        assert sum(stage.weights) == stage.weight_scale == 256
    assert pre.lut_count == lut_count
    assert storage_bytes(pre) == total_bytes == patterns_per_stage * 2 * 83521


def test_preset_unknown_name():
    with pytest.raises(ValueError):
        preset("X")


def test_storage_rounding_matches_published_kb():
    # Published sizes round to 164 / 492 / 1148 KB.
    for name, kb in [("U", 164), ("V", 492), ("F", 1148)]:
        assert abs(storage_bytes(preset(name)) / 1024 - kb) / kb < 0.01


def test_pattern_geometry_validation():
    with pytest.raises(ValueError):
        PatternGeometry(1, ((0, 1), (0, 0), (1, 0), (1, 1)))  # target not first
    with pytest.raises(ValueError):
        PatternGeometry(1, ((0, 0), (0, 0), (1, 0), (1, 1)))  # duplicate
    with pytest.raises(ValueError):
        PatternGeometry(1, ((0, 0), (0, 4), (1, 0), (1, 1)))  # outside 7x7
    with pytest.raises(ValueError):
        PatternGeometry(0, ((0, 0), (0, 1), (1, 0), (1, 1)))


def test_default_patterns_cover_documented_ranges():
    assert default_pattern(1).offsets == ((0, 0), (0, 1), (1, 0), (1, 1))
    assert default_pattern(2).offsets == ((0, 0), (0, 2), (2, 0), (2, 2))
    # With rotations, patterns 1-3 reach at most 2 -> 5x5 per stage;
    # patterns 1-7 reach at most 3 -> 7x7 per stage.
    for ids, reach in [((1,), 1), ((1, 2, 3), 2), ((1, 2, 3, 4, 5, 6, 7), 3)]:
        worst = max(
            max(abs(dy), abs(dx))
            for pid in ids
            for dy, dx in default_pattern(pid).offsets
        )
        assert worst == reach


def test_stage_spec_renormalizes_on_load():
    stage = StageSpec(
        patterns=(default_pattern(1), default_pattern(2)), weights=(3, 1)
    )
    assert sum(stage.weights) == 256
    assert stage.weights == (192, 64)


def test_stage_spec_validation():
    with pytest.raises(ValueError):
        StageSpec(patterns=(), weights=())
    with pytest.raises(ValueError):
        StageSpec(patterns=(default_pattern(1), default_pattern(1)), weights=(1, 1))
    with pytest.raises(ValueError):
        StageSpec(patterns=(default_pattern(1),), weights=(0,))


@given(st.lists(st.integers(min_value=0, max_value=10_000), min_size=1, max_size=8))
def test_renormalize_weights_properties(raw):
    if sum(raw) == 0:
        with pytest.raises(ValueError):
            renormalize_weights(raw, 256)
        return
    out = renormalize_weights(raw, 256)
    assert sum(out) == 256
    assert all(w >= 0 for w in out)
    # argmax preserved
    assert out[raw.index(max(raw))] == max(out)


def test_lutset_requires_full_coverage(rng):
    pre = preset("U")
    values = rng.integers(0, 256, (17,) * 4, dtype=np.uint8)
    luts = {(1, 1): ClippedLut(values=values, pattern_id=1, stage_index=1)}
    with pytest.raises(ValueError):
        LutSet(preset=pre, qp=0, luts=luts)
    luts[(2, 1)] = ClippedLut(values=values, pattern_id=1, stage_index=2)
    ls = LutSet(preset=pre, qp=0, luts=luts)
    assert ls.lut(2, 1).stage_index == 2
    assert set(ls.stage_luts(1)) == {1}


def test_lut_values_immutable(rng):
    values = rng.integers(0, 256, (17,) * 4, dtype=np.uint8)
    lut = ClippedLut(values=values)
    with pytest.raises(ValueError):
        lut.values[0, 0, 0, 0] = 1
