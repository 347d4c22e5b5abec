"""Two-stage training: micro-nets -> lattice cache -> table finetuning."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
import torch

from .formats import LATTICE_BINS, lattice_sample, quantize_weights
from .geometry import PRESET_PATTERNS, pattern_taps
from .model import LutHead, PatternNet, StageMix


@dataclass
class StageDataset:
    taps: dict  # pattern id -> float32 tensor (4, N, 4)
    target: torch.Tensor  # float32 (N,)


@dataclass
class TrainConfig:
    preset: str = "V"
    degrade_step: float = 24.0
    samples_per_image: int = 16000
    hidden: int = 48
    net_steps: int = 400
    finetune_steps: int = 400
    batch_size: int = 8192
    lr: float = 1e-3
    finetune_lr: float = 0.5
    seed: int = 0


@dataclass
class TrainResult:
    preset: str
    dumps: dict = field(default_factory=dict)  # (stage, pattern) -> uint8 (83521,)
    stage_weights: dict = field(default_factory=dict)  # stage -> int tuple


def make_stage_dataset(inputs, targets, pattern_ids, samples_per_image, rng):
    """Sample pixel positions from each plane pair and gather their taps."""
    taps = {pid: [] for pid in pattern_ids}
    target = []
    for src, dst in zip(inputs, targets):
        h, w = src.shape
        n = min(samples_per_image, h * w)
        flat = rng.choice(h * w, size=n, replace=False)
        ys, xs = np.divmod(flat, w)
        for pid in pattern_ids:
            all_taps = pattern_taps(src, pid)  # (4, H, W, 4)
            taps[pid].append(all_taps[:, ys, xs, :].astype(np.float32))
        target.append(dst[ys, xs].astype(np.float32))
    return StageDataset(
        taps={pid: torch.from_numpy(np.concatenate(t, axis=1)) for pid, t in taps.items()},
        target=torch.from_numpy(np.concatenate(target)),
    )


def _train_mix(mix: StageMix, ds: StageDataset, steps, lr, batch_size, seed):
    torch.manual_seed(seed)
    opt = torch.optim.Adam(mix.parameters(), lr=lr)
    n = ds.target.shape[0]
    gen = torch.Generator().manual_seed(seed)
    for _ in range(steps):
        sel = torch.randint(0, n, (min(batch_size, n),), generator=gen)
        pred = mix({pid: t[:, sel] for pid, t in ds.taps.items()})
        loss = torch.nn.functional.mse_loss(pred.clamp(0.0, 255.0), ds.target[sel])
        opt.zero_grad()
        loss.backward()
        opt.step()
    return mix


def lattice_grid():
    """(83521, 4) float32 tensor of all lattice sample combinations."""
    samples = [float(lattice_sample(b)) for b in range(LATTICE_BINS)]
    grid = np.array(list(itertools.product(samples, repeat=4)), dtype=np.float32)
    return torch.from_numpy(grid)


def cache_head(head, chunk=16384):
    """Evaluate a pattern head on the 17^4 lattice -> uint8 values."""
    grid = lattice_grid()
    out = []
    with torch.no_grad():
        for start in range(0, grid.shape[0], chunk):
            v = head(grid[start : start + chunk])
            out.append(v.clamp(0.0, 255.0).round().to(torch.uint8))
    return torch.cat(out).numpy()


def stage_apply(plane, luts, int_weights, pattern_ids):
    """Integer-exact stage forward (matches the filter engine's arithmetic)."""
    from .interp import simplex_interp_rounded

    h, w = plane.shape
    acc = torch.zeros((h, w), dtype=torch.float64)
    with torch.no_grad():
        for weight, pid in zip(int_weights, pattern_ids):
            taps = torch.from_numpy(pattern_taps(plane, pid).astype(np.float64))
            lut = torch.from_numpy(luts[pid].astype(np.float64))
            vals = simplex_interp_rounded(lut, taps.reshape(-1, 4)).reshape(4, h, w)
            ens = torch.floor((vals.sum(dim=0) + 2.0) / 4.0)
            acc += weight * ens
    out = torch.floor((acc + 128.0) / 256.0).clamp(0.0, 255.0)
    return out.to(torch.uint8).numpy()


def _train_one_stage(inputs, targets, pattern_ids, cfg: TrainConfig, stage_index, rng):
    ds = make_stage_dataset(inputs, targets, pattern_ids, cfg.samples_per_image, rng)

    nets = {pid: PatternNet(hidden=cfg.hidden) for pid in pattern_ids}
    net_mix = StageMix(nets)
    _train_mix(net_mix, ds, cfg.net_steps, cfg.lr, cfg.batch_size, cfg.seed + stage_index)

    cached = {pid: cache_head(net_mix.heads[str(pid)]) for pid in pattern_ids}

    lut_mix = StageMix(
        {pid: LutHead(cached[pid]) for pid in pattern_ids},
        logits=net_mix.logits.detach(),
    )
    _train_mix(lut_mix, ds, cfg.finetune_steps, cfg.finetune_lr, cfg.batch_size, cfg.seed + 10 + stage_index)

    luts = {pid: lut_mix.heads[str(pid)].export_uint8() for pid in pattern_ids}
    weights = quantize_weights(lut_mix.mix_weights().detach().numpy())
    return luts, weights


def train_pipeline(pairs, cfg: TrainConfig):
    """Train both stages on (degraded, clean) plane pairs.

    Stage 2 is trained on the quantized stage-1 output, exactly as the
    filter engine will produce it at inference time.
    """
    pattern_ids = PRESET_PATTERNS[cfg.preset]
    rng = np.random.default_rng(cfg.seed)
    degraded = [d for d, _ in pairs]
    clean = [c for _, c in pairs]

    result = TrainResult(preset=cfg.preset)

    luts1, weights1 = _train_one_stage(degraded, clean, pattern_ids, cfg, 1, rng)
    result.stage_weights[1] = weights1
    for pid in pattern_ids:
        result.dumps[(1, pid)] = luts1[pid]

    intermediate = [stage_apply(d, luts1, weights1, pattern_ids) for d in degraded]

    luts2, weights2 = _train_one_stage(intermediate, clean, pattern_ids, cfg, 2, rng)
    result.stage_weights[2] = weights2
    for pid in pattern_ids:
        result.dumps[(2, pid)] = luts2[pid]
    return result
