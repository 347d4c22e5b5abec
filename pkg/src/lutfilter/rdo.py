"""CTU-level rate-distortion decisions and evaluation metrics.

Per CTU the filter is switched on iff J_on < J_off, where
J = SSD + lambda * flag_bits.  Rate estimation is a configurable
constant-bit model; with the defaults and lambda = 0 the decision reduces
to a plain SSD comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import DEFAULT_CTU_SIZE


@dataclass(frozen=True)
class RdoConfig:
    ctu_size: int = DEFAULT_CTU_SIZE
    lam: float = 0.0
    flag_bits_on: float = 1.0
    flag_bits_off: float = 1.0

    def __post_init__(self):
        if self.ctu_size < 1:
            raise ValueError("ctu_size must be >= 1")
        if self.lam < 0:
            raise ValueError("lambda must be non-negative")


def default_lambda(qp):
    """Conventional codec lambda schedule: 0.57 * 2^((qp - 12) / 3)."""
    return 0.57 * 2.0 ** ((qp - 12) / 3.0)


@dataclass(frozen=True)
class FlagMap:
    flags: np.ndarray  # bool grid, one per CTU (partial border CTUs included)
    j_on: np.ndarray
    j_off: np.ndarray

    def grid_text(self):
        """0/1 rows, one line per CTU row (1 = filtered)."""
        return "\n".join("".join("1" if f else "0" for f in row) for row in self.flags)


@dataclass(frozen=True)
class UsageStats:
    n_test: int
    n_total: int

    @property
    def ratio(self):
        return Fraction(self.n_test, self.n_total)


def ssd(a, b):
    """Sum of squared differences between two congruent uint8 regions."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    d = a.astype(np.int64) - b.astype(np.int64)
    return int((d * d).sum())


def psnr(a, b):
    """Peak signal-to-noise ratio in dB; +inf for identical planes."""
    a = np.asarray(a)
    b = np.asarray(b)
    e = ssd(a, b)
    if e == 0:
        return math.inf
    return 10.0 * math.log10(255.0**2 * a.size / e)


def decide(recon, filtered, original, cfg: RdoConfig):
    """Choose filtered vs reconstructed per CTU and stitch the output plane.

    Returns (FlagMap, output plane, UsageStats).  Ties keep the filter off.
    """
    recon = np.asarray(recon)
    filtered = np.asarray(filtered)
    original = np.asarray(original)
    if not (recon.shape == filtered.shape == original.shape):
        raise ValueError("recon/filtered/original shapes differ")
    h, w = recon.shape
    size = cfg.ctu_size
    rows = -(-h // size)
    cols = -(-w // size)
    flags = np.zeros((rows, cols), dtype=bool)
    j_on = np.zeros((rows, cols))
    j_off = np.zeros((rows, cols))
    out = recon.copy()
    n_test = 0
    for i in range(rows):
        for j in range(cols):
            ys = slice(i * size, min((i + 1) * size, h))
            xs = slice(j * size, min((j + 1) * size, w))
            on = ssd(filtered[ys, xs], original[ys, xs]) + cfg.lam * cfg.flag_bits_on
            off = ssd(recon[ys, xs], original[ys, xs]) + cfg.lam * cfg.flag_bits_off
            j_on[i, j] = on
            j_off[i, j] = off
            if on < off:
                flags[i, j] = True
                out[ys, xs] = filtered[ys, xs]
                n_test += 1
    flags.flags.writeable = False
    return (
        FlagMap(flags=flags, j_on=j_on, j_off=j_off),
        out,
        UsageStats(n_test=n_test, n_total=rows * cols),
    )
