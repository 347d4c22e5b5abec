"""Per-pattern micro-networks and the stage mixing model."""

from __future__ import annotations

import torch
from torch import nn


class PatternNet(nn.Module):
    """Tiny residual MLP over the 4 taps of one reference pattern.

    Predicts a correction to the target tap, so an untrained net already
    behaves like the identity filter.
    """

    def __init__(self, hidden=48):
        super().__init__()
        self.body = nn.Sequential(
            nn.Linear(4, hidden),
            nn.SiLU(),
            nn.Linear(hidden, hidden),
            nn.SiLU(),
            nn.Linear(hidden, 1),
        )
        # start at (near) identity
        last = self.body[-1]
        nn.init.zeros_(last.weight)
        nn.init.zeros_(last.bias)

    def forward(self, taps):
        """taps (..., 4) in [0, 255] -> filtered sample (...,)."""
        x = taps / 127.5 - 1.0
        return taps[..., 0] + 32.0 * self.body(x).squeeze(-1)


class StageMix(nn.Module):
    """Rotation ensemble + softmax pattern mixing for one stage.

    `heads` maps pattern id -> callable taking (..., 4) taps to (...,)
    samples (a PatternNet or a differentiable table lookup).
    """

    def __init__(self, heads, logits=None):
        super().__init__()
        self.pattern_ids = sorted(heads)
        self.heads = nn.ModuleDict({str(pid): heads[pid] for pid in self.pattern_ids})
        init = torch.zeros(len(self.pattern_ids)) if logits is None else torch.as_tensor(logits, dtype=torch.float32)
        self.logits = nn.Parameter(init.clone())

    def mix_weights(self):
        return torch.softmax(self.logits, dim=0)

    def forward(self, taps_by_pattern):
        """taps_by_pattern: {pid: (4, N, 4)} rotations x samples x taps."""
        weights = self.mix_weights()
        out = 0.0
        for w, pid in zip(weights, self.pattern_ids):
            ens = self.heads[str(pid)](taps_by_pattern[pid]).mean(dim=0)
            out = out + w * ens
        return out


class LutHead(nn.Module):
    """Differentiable clipped-table head used during finetuning."""

    def __init__(self, values):
        super().__init__()
        self.values = nn.Parameter(torch.as_tensor(values, dtype=torch.float32).reshape(-1).clone())

    def forward(self, taps):
        from .interp import simplex_interp

        shape = taps.shape[:-1]
        out = simplex_interp(self.values, taps.reshape(-1, 4), quantized=False)
        return out.reshape(shape)

    def export_uint8(self):
        with torch.no_grad():
            return self.values.clamp(0, 255).round().to(torch.uint8).numpy()
