"""Pure-numpy fallback kernels; bit-identical to the compiled extension."""

from __future__ import annotations

import numpy as np

_STRIDES = np.array([17**3, 17**2, 17, 1], dtype=np.int64)[:, None]


def interp4d_many(lut_flat, q):
    """Vectorized simplex retrieval.

    lut_flat: (83521,) uint8, row-major over the 17^4 lattice.
    q: (4, N) integer samples in [0, 255].  Returns (N,) int64 in [0, 255].
    """
    q = np.asarray(q, dtype=np.int64)
    msb = q >> 4
    lsb = q & 15
    # Top cell [240, 255] is 15 wide: rescale its fraction to the 0..16
    # weight range so lattice points and identity tables stay exact.
    lsb = np.where(msb == 15, (16 * lsb + 7) // 15, lsb)
    # Dimensions sorted by LSB descending; stable sort breaks ties toward
    # the lower dimension index.
    order = np.argsort(-lsb, axis=0, kind="stable")
    lo = np.take_along_axis(lsb, order, axis=0)
    weights = np.stack(
        [16 - lo[0], lo[0] - lo[1], lo[1] - lo[2], lo[2] - lo[3], lo[3]]
    )
    lut_flat = np.ascontiguousarray(lut_flat).reshape(-1)
    acc = weights[0] * lut_flat[(msb * _STRIDES).sum(axis=0)].astype(np.int64)
    offs = np.zeros_like(msb)
    cols = np.arange(q.shape[1])
    for k in range(4):
        offs[order[k], cols] = 1
        idx = (np.minimum(msb + offs, 16) * _STRIDES).sum(axis=0)
        acc += weights[k + 1] * lut_flat[idx].astype(np.int64)
    return (acc + 8) >> 4


def filter_stage(plane, offsets, luts_flat, weights, weight_scale):
    """One filtering stage over a whole plane.

    plane: (H, W) uint8.
    offsets: (P, 4, 4, 2) pre-rotated (dy, dx) taps per pattern and rotation.
    luts_flat: (P, 83521) uint8.
    weights: (P,) fixed-point pattern weights summing to weight_scale.
    """
    h, w = plane.shape
    ys, xs = np.mgrid[0:h, 0:w]
    acc = np.zeros(h * w, dtype=np.int64)
    n_patterns = offsets.shape[0]
    for p in range(n_patterns):
        total = np.zeros(h * w, dtype=np.int64)
        for r in range(4):
            taps = []
            for t in range(4):
                dy, dx = offsets[p, r, t]
                yy = np.clip(ys + int(dy), 0, h - 1)
                xx = np.clip(xs + int(dx), 0, w - 1)
                taps.append(plane[yy, xx].ravel())
            total += interp4d_many(luts_flat[p], np.stack(taps))
        ensemble = (total + 2) >> 2
        acc += int(weights[p]) * ensemble
    out = (acc + weight_scale // 2) // weight_scale
    return np.clip(out, 0, 255).astype(np.uint8).reshape(h, w)
