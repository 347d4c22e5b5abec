"""Reference-pattern geometry and tap gathering for training.

The default pattern set and the rotation rule mirror the filter engine's
documented behavior; the trainer keeps its own copy so that it depends on
the engine only through files and its CLI.
"""

from __future__ import annotations

import numpy as np

DEFAULT_PATTERN_OFFSETS = {
    1: ((0, 0), (0, 1), (1, 0), (1, 1)),
    2: ((0, 0), (0, 2), (2, 0), (2, 2)),
    3: ((0, 0), (1, 1), (1, 2), (2, 1)),
    4: ((0, 0), (0, 3), (3, 0), (3, 3)),
    5: ((0, 0), (1, 3), (3, 1), (3, 3)),
    6: ((0, 0), (2, 3), (3, 2), (2, 2)),
    7: ((0, 0), (0, 2), (3, 0), (1, 3)),
}

PRESET_PATTERNS = {"U": (1,), "V": (1, 2, 3), "F": (1, 2, 3, 4, 5, 6, 7)}


def rotate_offset(dy, dx, quarter_turns):
    for _ in range(quarter_turns % 4):
        dy, dx = dx, -dy
    return dy, dx


def gather_taps(plane, offsets, rotation):
    """(H, W, 4) tap array with clamped (replicate) out-of-bounds reads."""
    plane = np.asarray(plane)
    h, w = plane.shape
    ys, xs = np.mgrid[0:h, 0:w]
    taps = np.empty((h, w, len(offsets)), dtype=plane.dtype)
    for k, (dy, dx) in enumerate(offsets):
        ry, rx = rotate_offset(dy, dx, rotation)
        taps[:, :, k] = plane[np.clip(ys + ry, 0, h - 1), np.clip(xs + rx, 0, w - 1)]
    return taps


def pattern_taps(plane, pattern_id):
    """(4, H, W, 4) taps for all four rotations of one pattern."""
    offsets = DEFAULT_PATTERN_OFFSETS[pattern_id]
    return np.stack([gather_taps(plane, offsets, r) for r in range(4)])
