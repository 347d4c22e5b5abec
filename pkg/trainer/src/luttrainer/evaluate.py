"""Held-out evaluation through the filter engine's CLI."""

from __future__ import annotations

import subprocess
import tempfile
from pathlib import Path

from .degrade import dct_quantize
from .export import FILTER_CLI
from .formats import write_pgm


def run_engine_eval(lut_path, degraded, original, weights_config=None, lam=0.0, ctu_size=128):
    """Run the engine's `eval` on one plane pair; return the printed metrics.

    Returns {"psnr_before": float, "psnr_filtered": float,
    "psnr_after": float, "usage": float}.
    """
    with tempfile.TemporaryDirectory() as td:
        td = Path(td)
        write_pgm(td / "degraded.pgm", degraded)
        write_pgm(td / "original.pgm", original)
        cmd = FILTER_CLI + [
            "eval",
            "--lut", str(lut_path),
            "-i", str(td / "degraded.pgm"),
            "--original", str(td / "original.pgm"),
            "--lam", str(lam),
            "--ctu-size", str(ctu_size),
            "--flag-grid", str(td / "flags.txt"),
        ]
        if weights_config:
            cmd += ["--config", str(weights_config)]
        proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.returncode != 0:
        raise RuntimeError(f"filter CLI eval failed: {proc.stderr.strip()}")
    metrics = {}
    for line in proc.stdout.splitlines():
        if line.startswith("psnr_"):
            key, value = line.split(":")
            metrics[key.strip()] = float(value.strip().split()[0])
        elif line.startswith("usage:"):
            metrics["usage"] = float(line.rsplit("=", 1)[1])
    return metrics


def evaluate_heldout(lut_path, planes, degrade_step, weights_config=None, lam=0.0, ctu_size=128):
    """Degrade each held-out plane and score the trained tables on it."""
    report = {}
    for name, plane in planes.items():
        degraded = dct_quantize(plane, step=degrade_step)
        report[name] = run_engine_eval(
            lut_path, degraded, plane, weights_config=weights_config, lam=lam, ctu_size=ctu_size
        )
    return report
