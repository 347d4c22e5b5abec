"""Differentiable simplex interpolation over a clipped 17^4 table.

The forward pass mirrors the filter engine's retrieval: split each input
into a 4-bit cell index and a fractional part, rescale the fraction inside
the short top cell, sort the fractions descending (stable, ties broken by
lower dimension), and blend the five nested cell corners.  Gradients flow
to the table values (linear) and to the inputs (through the piecewise
linear fractional weights).
"""

from __future__ import annotations

import torch

BINS = 17
CELL = 16.0


def _cell_split(x, quantized):
    xc = x.clamp(0.0, 255.0)
    msb = torch.div(xc, CELL, rounding_mode="floor").clamp(max=15.0)
    frac = xc - CELL * msb
    top = msb == 15.0
    if quantized:
        frac = torch.where(top, torch.floor((CELL * frac + 7.0) / 15.0), frac)
    else:
        frac = torch.where(top, frac * (CELL / 15.0), frac)
    return msb, frac


def _vertex_values(lut, msb_long, order):
    n = msb_long.shape[0]
    flat = lut.reshape(-1)
    rows = torch.arange(n, device=msb_long.device)
    cur = msb_long.clone()

    def flat_index(ix):
        return ((ix[:, 0] * BINS + ix[:, 1]) * BINS + ix[:, 2]) * BINS + ix[:, 3]

    vals = [flat[flat_index(cur)]]
    for k in range(4):
        cur[rows, order[:, k]] = (cur[rows, order[:, k]] + 1).clamp(max=BINS - 1)
        vals.append(flat[flat_index(cur)])
    return torch.stack(vals, dim=1)


def simplex_interp(lut, x, quantized=False):
    """Interpolate `lut` (17^4 values) at `x` (N, 4) in [0, 255] -> (N,).

    quantized=False keeps the top-cell rescale smooth for training;
    quantized=True reproduces the engine's integer fraction rescale (the
    caller is then responsible for final rounding, see rounded output).
    """
    msb, frac = _cell_split(x, quantized)
    order = torch.argsort(-frac, dim=1, stable=True)
    fs = torch.gather(frac, 1, order)
    weights = torch.stack(
        [CELL - fs[:, 0], fs[:, 0] - fs[:, 1], fs[:, 1] - fs[:, 2], fs[:, 2] - fs[:, 3], fs[:, 3]],
        dim=1,
    )
    vals = _vertex_values(lut, msb.long(), order)
    return (weights * vals).sum(dim=1) / CELL


def simplex_interp_rounded(lut, x):
    """Integer retrieval: round-half-up of the weighted sum, as the engine.

    `lut` holds integer-valued entries (any float dtype), `x` integer-valued
    samples in [0, 255].  Exact in float64 (sums stay below 2^53).
    """
    acc = simplex_interp(lut.double(), x.double(), quantized=True) * CELL
    return torch.floor((acc + 8.0) / CELL)
