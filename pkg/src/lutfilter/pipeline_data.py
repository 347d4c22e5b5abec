"""Array packing shared by the kernel backends."""

from __future__ import annotations

import numpy as np


def _rotate(dy, dx, rotation):
    for _ in range(rotation % 4):
        dy, dx = dx, -dy
    return dy, dx


def stage_arrays(stage, luts):
    """Pack a StageSpec + LUT mapping into kernel-ready arrays.

    Returns (offsets, luts_flat, weights):
      offsets   (P, 4, 4, 2) int32, taps pre-rotated for each of the 4 rotations
      luts_flat (P, 83521) uint8, C-contiguous
      weights   (P,) long, summing to stage.weight_scale
    """
    n = len(stage.patterns)
    offsets = np.zeros((n, 4, 4, 2), dtype=np.int32)
    luts_flat = np.empty((n, 17**4), dtype=np.uint8)
    weights = np.asarray(stage.weights, dtype=np.int_)
    for p, pattern in enumerate(stage.patterns):
        luts_flat[p] = luts[pattern.id].flat
        for r in range(4):
            for t, (dy, dx) in enumerate(pattern.offsets):
                offsets[p, r, t] = _rotate(dy, dx, r)
    return offsets, np.ascontiguousarray(luts_flat), weights
