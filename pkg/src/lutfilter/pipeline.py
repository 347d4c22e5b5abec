"""End-to-end plane filtering: rotation ensemble, pattern mixing, cascade.

Per pixel and stage: every pattern is retrieved at 4 planar rotations of its
taps, the four retrievals are averaged (single rounding point), and the
per-pattern results are mixed by fixed-point weights.  Stage 2 re-indexes
over stage 1's output plane, which doubles the effective reference range.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .core import LutSet, PipelinePreset, StageSpec
from .interp import interp_4d

ROTATIONS = (0, 1, 2, 3)


def as_plane(arr):
    """Validate/convert an array to a 2D uint8 plane."""
    plane = np.asarray(arr)
    if plane.ndim != 2 or plane.size == 0:
        raise ValueError(f"plane must be 2D and non-empty, got shape {plane.shape}")
    if plane.dtype != np.uint8:
        if plane.min() < 0 or plane.max() > 255:
            raise ValueError("plane samples out of [0, 255]")
        plane = plane.astype(np.uint8)
    return plane


def rotate_offset(dy, dx, rotation):
    """Rotate a tap offset about the target pixel by rotation*90 degrees."""
    for _ in range(rotation % 4):
        dy, dx = dx, -dy
    return dy, dx


def gather(plane, x, y, pattern, rotation):
    """Read the pattern's 4 taps at (x, y) with replicate border padding."""
    plane = np.asarray(plane)
    h, w = plane.shape
    taps = []
    for dy, dx in pattern.offsets:
        ry, rx = rotate_offset(dy, dx, rotation)
        yy = min(max(y + ry, 0), h - 1)
        xx = min(max(x + rx, 0), w - 1)
        taps.append(int(plane[yy, xx]))
    return taps


def filter_pixel_stage(plane, x, y, stage: StageSpec, luts):
    """One pixel through one stage; `luts` maps pattern_id -> ClippedLut.

    Scalar reference path; the plane kernels must match it bit-exactly.
    """
    acc = 0
    for pattern, weight in zip(stage.patterns, stage.weights):
        if pattern.id not in luts:
            raise KeyError(f"no LUT for pattern {pattern.id}")
        lut = luts[pattern.id]
        total = 0
        for rotation in ROTATIONS:
            total += interp_4d(lut, gather(plane, x, y, pattern, rotation))
        ensemble = (total + 2) >> 2
        acc += weight * ensemble
    out = (acc + stage.weight_scale // 2) // stage.weight_scale
    return max(0, min(255, out))


def filter_stage(plane, stage: StageSpec, luts, backend=None):
    """Filter a whole plane through one stage via the kernel backend."""
    plane = as_plane(plane)
    for pattern in stage.patterns:
        if pattern.id not in luts:
            raise KeyError(f"no LUT for pattern {pattern.id}")
    return kernels.filter_stage(plane, stage, luts, backend=backend)


def filter_plane(plane, preset: PipelinePreset, lut_set: LutSet, backend=None):
    """Two-stage cascaded filtering of a plane; output shape equals input.

    Stage 2 indexes the 8-bit intermediate produced by stage 1.
    """
    if lut_set.preset is not preset and lut_set.preset != preset:
        raise ValueError("LUT set was built for a different preset")
    plane = as_plane(plane)
    intermediate = filter_stage(plane, preset.stages[0], lut_set.stage_luts(1), backend=backend)
    return filter_stage(intermediate, preset.stages[1], lut_set.stage_luts(2), backend=backend)


def effective_range(preset: PipelinePreset):
    """Side length of the cascaded receptive field box (5/9/13 for U/V/F)."""
    per_stage = []
    for stage in preset.stages:
        reach = 0
        for pattern in stage.patterns:
            for dy, dx in pattern.offsets:
                for r in ROTATIONS:
                    ry, rx = rotate_offset(dy, dx, r)
                    reach = max(reach, abs(ry), abs(rx))
        per_stage.append(reach)
    return 2 * sum(per_stage) + 1
