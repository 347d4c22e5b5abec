"""Deterministic degradation model: blockwise DCT quantization.

Quantizing 8x8 DCT blocks with a frequency-ramped step introduces the
blocking and ringing artifacts the filter is trained to remove.
"""

from __future__ import annotations

import numpy as np
from scipy.fft import dctn, idctn


def _quant_matrix(step, block):
    u = np.arange(block)
    return step * (1.0 + 0.5 * (u[:, None] + u[None, :]))


def dct_quantize(plane, step=24.0, block=8):
    """Compress-like degradation: per-block DCT, quantize, inverse DCT."""
    if step <= 0:
        raise ValueError("step must be positive")
    plane = np.asarray(plane, dtype=np.float64)
    h, w = plane.shape
    ph = -h % block
    pw = -w % block
    padded = np.pad(plane, ((0, ph), (0, pw)), mode="edge")
    q = _quant_matrix(step, block)
    out = np.empty_like(padded)
    for y in range(0, padded.shape[0], block):
        for x in range(0, padded.shape[1], block):
            d = dctn(padded[y : y + block, x : x + block], norm="ortho")
            d = np.round(d / q) * q
            out[y : y + block, x : x + block] = idctn(d, norm="ortho")
    return np.clip(np.round(out[:h, :w]), 0, 255).astype(np.uint8)
