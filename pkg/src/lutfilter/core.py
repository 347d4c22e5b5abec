"""Core containers: clipped 4D LUTs, indexing patterns and pipeline presets.

A clipped LUT stores one 8-bit output sample for every 4-tuple of lattice
inputs (17 bins per dimension, lattice values 0,16,...,240,255).  Presets
bundle two cascaded stages, each a set of indexing patterns with fixed-point
combination weights.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

BINS_PER_DIM = 17
LUT_ENTRIES = BINS_PER_DIM**4  # 83521
LUT_BYTES = LUT_ENTRIES  # one uint8 per entry
MSB_BITS = 4
LSB_BITS = 4
WEIGHT_SCALE = 256
MAX_OFFSET = 3  # patterns must stay inside the 7x7 stage window
DEFAULT_CTU_SIZE = 128

PRESET_NAMES = ("U", "V", "F")


def lattice_value(bin_index):
    """Input sample stored at a lattice bin: min(16*b, 255)."""
    if not 0 <= bin_index <= 16:
        raise ValueError(f"bin index out of range: {bin_index}")
    return min(16 * bin_index, 255)


@dataclass(frozen=True)
class PatternGeometry:
    """Four (dy, dx) taps addressing one 4D LUT; the first tap is the target pixel."""

    id: int
    offsets: tuple

    def __post_init__(self):
        offsets = tuple((int(dy), int(dx)) for dy, dx in self.offsets)
        object.__setattr__(self, "offsets", offsets)
        if not 1 <= self.id <= 7:
            raise ValueError(f"pattern id out of range: {self.id}")
        if len(offsets) != 4:
            raise ValueError("pattern needs exactly 4 offsets")
        if offsets[0] != (0, 0):
            raise ValueError("first offset must be the target pixel (0, 0)")
        if len(set(offsets)) != 4:
            raise ValueError("pattern offsets must be distinct")
        for dy, dx in offsets:
            if abs(dy) > MAX_OFFSET or abs(dx) > MAX_OFFSET:
                raise ValueError(f"offset ({dy}, {dx}) outside the 7x7 window")


# Default tap geometries.  Pattern 1 is the unit 2x2 block, pattern 2 its
# dilation-2 analogue, pattern 3 a Y-shaped fill-in so patterns 1-3 plus the
# rotation ensemble cover 5x5.  Patterns 4-7 extend the reach to dilation 3 so
# that patterns 1-7 plus rotations cover 7x7.  Geometry is configuration data;
# a config file may override it (see lutio.parse_config).
DEFAULT_PATTERN_OFFSETS = {
    1: ((0, 0), (0, 1), (1, 0), (1, 1)),
    2: ((0, 0), (0, 2), (2, 0), (2, 2)),
    3: ((0, 0), (1, 1), (1, 2), (2, 1)),
    4: ((0, 0), (0, 3), (3, 0), (3, 3)),
    5: ((0, 0), (1, 3), (3, 1), (3, 3)),
    6: ((0, 0), (2, 3), (3, 2), (2, 2)),
    7: ((0, 0), (0, 2), (3, 0), (1, 3)),
}


def default_pattern(pattern_id):
    return PatternGeometry(pattern_id, DEFAULT_PATTERN_OFFSETS[pattern_id])


def renormalize_weights(weights, scale):
    """Scale non-negative weights so they sum to `scale` exactly.

    Uses largest-remainder rounding; preserves the argmax weight.
    """
    weights = [int(w) for w in weights]
    if any(w < 0 for w in weights):
        raise ValueError("weights must be non-negative")
    total = sum(weights)
    if total == 0:
        raise ValueError("weights must not all be zero")
    if total == scale:
        return tuple(weights)
    quotas = [w * scale / total for w in weights]
    floors = [int(q) for q in quotas]
    remainder = scale - sum(floors)
    # Hand out the leftover units by largest fractional part; break ties
    # toward the larger raw weight, then the lower index.
    order = sorted(
        range(len(weights)),
        key=lambda i: (-(quotas[i] - floors[i]), -weights[i], i),
    )
    for i in order[:remainder]:
        floors[i] += 1
    return tuple(floors)


@dataclass(frozen=True)
class StageSpec:
    """One filtering stage: patterns plus fixed-point combination weights."""

    patterns: tuple
    weights: tuple
    weight_scale: int = WEIGHT_SCALE

    def __post_init__(self):
        patterns = tuple(self.patterns)
        object.__setattr__(self, "patterns", patterns)
        if not patterns:
            raise ValueError("stage needs at least one pattern")
        ids = [p.id for p in patterns]
        if len(set(ids)) != len(ids):
            raise ValueError("pattern ids must be unique within a stage")
        scale = self.weight_scale
        if scale <= 0 or scale & (scale - 1):
            raise ValueError("weight_scale must be a power of two")
        weights = renormalize_weights(self.weights, scale)
        if len(weights) != len(patterns):
            raise ValueError("one weight per pattern required")
        object.__setattr__(self, "weights", weights)

    @property
    def pattern_ids(self):
        return tuple(p.id for p in self.patterns)


@dataclass(frozen=True)
class PipelinePreset:
    """Two cascaded stages; the LUT count follows from the pattern counts."""

    name: str
    stages: tuple

    def __post_init__(self):
        stages = tuple(self.stages)
        object.__setattr__(self, "stages", stages)
        if len(stages) != 2:
            raise ValueError("preset needs exactly 2 stages")

    @property
    def lut_count(self):
        return sum(len(s.patterns) for s in self.stages)


_PRESET_PATTERN_IDS = {"U": (1,), "V": (1, 2, 3), "F": (1, 2, 3, 4, 5, 6, 7)}


def preset(name):
    """Build a named preset (U, V or F) with default geometry and uniform weights."""
    if name not in _PRESET_PATTERN_IDS:
        raise ValueError(f"unknown preset: {name!r} (expected one of {PRESET_NAMES})")
    ids = _PRESET_PATTERN_IDS[name]
    stage = StageSpec(
        patterns=tuple(default_pattern(i) for i in ids),
        weights=(1,) * len(ids),
    )
    return PipelinePreset(name=name, stages=(stage, stage))


def storage_bytes(pipeline_preset):
    """Total value-byte footprint of a preset's LUTs (83521 bytes per LUT)."""
    return pipeline_preset.lut_count * LUT_BYTES


@dataclass(frozen=True)
class ClippedLut:
    """17^4 sampled 4D table of uint8 outputs for one (pattern, stage, qp)."""

    values: np.ndarray
    pattern_id: int = 1
    stage_index: int = 1
    qp: int = 0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.uint8)
        if values.size != LUT_ENTRIES:
            raise ValueError(f"LUT needs {LUT_ENTRIES} entries, got {values.size}")
        values = values.reshape((BINS_PER_DIM,) * 4)
        values.flags.writeable = False
        object.__setattr__(self, "values", values)
        if self.stage_index not in (1, 2):
            raise ValueError("stage_index must be 1 or 2")

    @property
    def flat(self):
        return self.values.reshape(-1)

    def storage_bytes(self):
        return LUT_BYTES


@dataclass(frozen=True)
class LutSet:
    """One ClippedLut per (stage, pattern) pair of a preset, for one QP."""

    preset: PipelinePreset
    qp: int
    luts: dict = field(default_factory=dict)

    def __post_init__(self):
        luts = dict(self.luts)
        object.__setattr__(self, "luts", luts)
        expected = {
            (si, p.id)
            for si, stage in enumerate(self.preset.stages, start=1)
            for p in stage.patterns
        }
        if set(luts) != expected:
            missing = expected - set(luts)
            extra = set(luts) - expected
            raise ValueError(f"LUT set mismatch: missing={sorted(missing)} extra={sorted(extra)}")
        for (si, pid), lut in luts.items():
            if (lut.stage_index, lut.pattern_id) != (si, pid):
                raise ValueError(f"LUT tagged {(lut.stage_index, lut.pattern_id)} stored at {(si, pid)}")

    def lut(self, stage_index, pattern_id):
        return self.luts[(stage_index, pattern_id)]

    def stage_luts(self, stage_index):
        """pattern_id -> ClippedLut mapping for one stage."""
        return {pid: lut for (si, pid), lut in self.luts.items() if si == stage_index}
