"""MSB/LSB decomposition and simplex interpolation over the clipped lattice.

Scalar reference implementations.  The pipeline uses the vectorized/compiled
kernels in `kernels`, which must agree with these functions bit-exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ClippedLut

W = 16  # sampling interval; interpolation weights sum to W


def split_msb_lsb(v):
    """Split an 8-bit sample into its 4 high and 4 low bits."""
    if not 0 <= v <= 255:
        raise ValueError(f"sample out of range: {v}")
    return v >> 4, v & 15


def _cell(v):
    """Interpolation cell for one sample: (base bin, effective fraction).

    The top cell [240, 255] is only 15 wide; its fraction is rescaled to the
    usual 0..16 weight range (round-to-nearest), so lattice points -- 255
    included -- and tables sampled from the identity map stay exact.
    """
    msb, lsb = v >> 4, v & 15
    if msb == 15:
        lsb = (16 * lsb + 7) // 15
    return msb, lsb


@dataclass(frozen=True)
class SimplexCase:
    """One of the 24 cell decompositions, selected by the LSB ordering."""

    order: tuple  # the 4 dimensions sorted by LSB descending, ties by index
    vertex_offsets: tuple  # 5 nested corners in {0,1}^4
    weights: tuple  # 5 non-negative ints summing to W

    def __post_init__(self):
        assert sum(self.weights) == W
        assert all(w >= 0 for w in self.weights)


def _case_parts(lsb):
    """(order, weights) for a fraction 4-tuple; fractions may reach W."""
    order = tuple(sorted(range(4), key=lambda d: (-lsb[d], d)))
    lo = [lsb[d] for d in order]
    weights = (W - lo[0], lo[0] - lo[1], lo[1] - lo[2], lo[2] - lo[3], lo[3])
    return order, weights


def simplex_case(lsb):
    """Select the simplex for a 4-tuple of LSBs.

    The vertex chain starts at the cell origin and adds one dimension at a
    time in order of decreasing LSB (ties broken by lower dimension index);
    the weights are the successive LSB differences.
    """
    lsb = tuple(int(v) for v in lsb)
    if len(lsb) != 4 or any(not 0 <= v <= 15 for v in lsb):
        raise ValueError(f"need 4 LSBs in 0..15, got {lsb}")
    order, weights = _case_parts(lsb)
    offsets = [(0, 0, 0, 0)]
    cur = [0, 0, 0, 0]
    for d in order:
        cur[d] = 1
        offsets.append(tuple(cur))
    return SimplexCase(order, tuple(offsets), weights)


def interp_2d(lut2d, i0, i1):
    """Triangle interpolation on a 17x17 table (2D analogue of interp_4d).

    The cell splits along its diagonal: Lx > Ly picks the lower triangle
    (vertex P10), otherwise the upper one (P01).  Integer round-half-up
    division by W.
    """
    lut2d = np.asarray(lut2d)
    m0, lx = _cell(int(i0))
    m1, ly = _cell(int(i1))

    def at(a, b):
        return int(lut2d[min(a, 16), min(b, 16)])

    p00 = at(m0, m1)
    p11 = at(m0 + 1, m1 + 1)
    if lx > ly:
        w0, w1, w2 = ly, lx - ly, W - lx
        pmid = at(m0 + 1, m1)  # P10
    else:
        w0, w1, w2 = lx, ly - lx, W - ly
        pmid = at(m0, m1 + 1)  # P01
    return (w0 * p11 + w1 * pmid + w2 * p00 + W // 2) >> 4


def interp_4d(lut, q):
    """Simplex-interpolated retrieval of a clipped 4D LUT at query q.

    q is a 4-tuple of samples in [0, 255]; the result is in [0, 255].
    Exact at every lattice tuple and (up to rounding) for tables sampled
    from affine functions.
    """
    values = lut.values if isinstance(lut, ClippedLut) else np.asarray(lut)
    msb = [0] * 4
    lsb = [0] * 4
    for d in range(4):
        v = int(q[d])
        if not 0 <= v <= 255:
            raise ValueError(f"sample out of range: {v}")
        msb[d], lsb[d] = _cell(v)
    order, weights = _case_parts(lsb)
    acc = weights[0] * int(values[tuple(msb)])
    cur = list(msb)
    for k, d in enumerate(order):
        cur[d] = min(cur[d] + 1, 16)
        if weights[k + 1]:
            acc += weights[k + 1] * int(values[tuple(cur)])
    return (acc + W // 2) >> 4
