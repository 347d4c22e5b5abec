"""Building clipped LUTs from filter oracles, plus brute-force test tables.

A filter oracle is any deterministic total function from 4 samples in
[0, 255] to one sample in [0, 255].  `cache_clipped_lut` samples it on the
17^4 lattice; `build_full_lut` tabulates it exhaustively at a reduced bit
depth (a full 8-bit table would be 4 GB, which is the whole reason the
clipped form exists), and `clipped_vs_full_report` measures the clipping +
interpolation error against that exhaustive truth.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import BINS_PER_DIM, ClippedLut, lattice_value

MAX_FULL_BIT_DEPTH = 6  # (2^6)^4 = 16.7M entries; 8 bits would need 4 GB


def identity_oracle(a, b, c, d):
    return a


def mean_oracle(a, b, c, d):
    return (a + b + c + d + 2) // 4


def make_affine_oracle(coeffs, bias=0):
    """Oracle computing clamp(round(c0*a + c1*b + c2*c + c3*d + bias))."""
    c0, c1, c2, c3 = coeffs

    def oracle(a, b, c, d):
        v = round(c0 * a + c1 * b + c2 * c + c3 * d + bias)
        return max(0, min(255, int(v)))

    return oracle


def make_dump_oracle(values):
    """Oracle backed by a precomputed 17^4 lattice dump.

    Only defined at lattice inputs; used to load trainer-exported tables
    without ever invoking a network at filter time.
    """
    values = np.asarray(values, dtype=np.uint8).reshape((BINS_PER_DIM,) * 4)
    inverse = {lattice_value(b): b for b in range(BINS_PER_DIM)}

    def oracle(a, b, c, d):
        try:
            idx = (inverse[a], inverse[b], inverse[c], inverse[d])
        except KeyError:
            raise ValueError("dump oracle is defined only at lattice inputs") from None
        return int(values[idx])

    return oracle


NAMED_ORACLES = {
    "identity": identity_oracle,
    "mean": mean_oracle,
}


def cache_clipped_lut(oracle, pattern_id=1, stage_index=1, qp=0):
    """Sample an oracle on the 17^4 lattice into a ClippedLut.

    Row-major traversal (first input outermost); exactly 83521 oracle calls.
    """
    lattice = [lattice_value(b) for b in range(BINS_PER_DIM)]
    values = np.empty((BINS_PER_DIM,) * 4, dtype=np.uint8)
    for b0, b1, b2, b3 in itertools.product(range(BINS_PER_DIM), repeat=4):
        v = oracle(lattice[b0], lattice[b1], lattice[b2], lattice[b3])
        if not 0 <= v <= 255:
            raise ValueError(f"oracle returned out-of-range value {v} at bins {(b0, b1, b2, b3)}")
        values[b0, b1, b2, b3] = v
    return ClippedLut(values=values, pattern_id=pattern_id, stage_index=stage_index, qp=qp)


@dataclass(frozen=True)
class FullLut:
    """Exhaustive reduced-depth table; testing oracle only."""

    bit_depth: int
    values: np.ndarray

    def __post_init__(self):
        n = 1 << self.bit_depth
        values = np.asarray(self.values, dtype=np.uint8).reshape((n,) * 4)
        values.flags.writeable = False
        object.__setattr__(self, "values", values)


def reduced_sample(i, bit_depth):
    """Map a reduced-depth index to its 8-bit sample (0 -> 0, max -> 255)."""
    top = (1 << bit_depth) - 1
    return int(round(i * 255 / top))


def build_full_lut(oracle, bit_depth):
    """Tabulate an oracle over all (2^bit_depth)^4 reduced-depth inputs."""
    if not 1 <= bit_depth <= MAX_FULL_BIT_DEPTH:
        raise ValueError(f"bit depth {bit_depth} exceeds the memory guard ({MAX_FULL_BIT_DEPTH})")
    n = 1 << bit_depth
    samples = [reduced_sample(i, bit_depth) for i in range(n)]
    values = np.empty((n,) * 4, dtype=np.uint8)
    for i0, i1, i2, i3 in itertools.product(range(n), repeat=4):
        v = oracle(samples[i0], samples[i1], samples[i2], samples[i3])
        if not 0 <= v <= 255:
            raise ValueError(f"oracle returned out-of-range value {v}")
        values[i0, i1, i2, i3] = v
    return FullLut(bit_depth=bit_depth, values=values)


def _interp_reduced(values, q, msb_bits, lsb_bits):
    """Simplex interpolation on a reduced-depth grid; testing path only.

    Generalizes the production retrieval: inputs are
    (msb_bits + lsb_bits)-bit and the grid has 2^msb_bits + 1 bins.  The top
    cell is one input unit short, so per-dimension fractions are brought to
    the common scale w_scale * (w_scale - 1), which keeps the interpolation
    exact for affine tables at every cell (the production 8-bit path instead
    rescales the top-cell fraction to its power-of-two weight range).
    """
    bins = 1 << msb_bits
    w_scale = 1 << lsb_bits
    common = w_scale * (w_scale - 1)
    msb = [0] * 4
    lsb = [0] * 4
    for d in range(4):
        v = int(q[d])
        m, l = v >> lsb_bits, v & (w_scale - 1)
        # Fraction of the cell, in units of 1/common.
        lsb[d] = l * (w_scale if m == bins - 1 else w_scale - 1)
        msb[d] = m
    order = sorted(range(4), key=lambda d: (-lsb[d], d))
    lo = [lsb[d] for d in order]
    weights = [common - lo[0], lo[0] - lo[1], lo[1] - lo[2], lo[2] - lo[3], lo[3]]
    acc = weights[0] * int(values[tuple(msb)])
    cur = list(msb)
    for k, d in enumerate(order):
        cur[d] = min(cur[d] + 1, bins)
        if weights[k + 1]:
            acc += weights[k + 1] * int(values[tuple(cur)])
    return (acc + common // 2) // common


@dataclass(frozen=True)
class DeviationReport:
    max_abs: int
    mean_abs: float
    n_inputs: int


def clipped_vs_full_report(oracle, msb_bits=2, lsb_bits=2, bit_depth=4):
    """Compare clipped+interpolated retrieval against exhaustive truth.

    The oracle is clipped to a (2^msb_bits + 1)-bin grid over the reduced
    input depth, interpolated at every reduced-depth input, and measured
    against the full table.  Requires msb_bits + lsb_bits == bit_depth.
    """
    if msb_bits + lsb_bits != bit_depth:
        raise ValueError("msb_bits + lsb_bits must equal bit_depth")
    full = build_full_lut(oracle, bit_depth)
    bins = 1 << msb_bits
    topval = (1 << bit_depth) - 1
    lattice_reduced = [min(b << lsb_bits, topval) for b in range(bins + 1)]
    clipped = np.empty((bins + 1,) * 4, dtype=np.uint8)
    for b in itertools.product(range(bins + 1), repeat=4):
        clipped[b] = full.values[tuple(lattice_reduced[i] for i in b)]
    n = 1 << bit_depth
    max_abs = 0
    total = 0
    for q in itertools.product(range(n), repeat=4):
        est = _interp_reduced(clipped, q, msb_bits, lsb_bits)
        truth = int(full.values[q])
        d = abs(est - truth)
        max_abs = max(max_abs, d)
        total += d
    count = n**4
    return DeviationReport(max_abs=max_abs, mean_abs=total / count, n_inputs=count)
