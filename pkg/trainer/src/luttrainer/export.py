"""Export trained tables through the filter engine's interchange surface:
lattice dumps + weights config on disk, and its CLI to assemble the
binary LUT container.
"""

from __future__ import annotations

import subprocess
import sys
from pathlib import Path

from .formats import dump_filename, write_dump, write_weights_config
from .train import TrainResult

FILTER_CLI = [sys.executable, "-m", "lutfilter.cli"]


def export_dumps(outdir, result: TrainResult, qp=0):
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = []
    for (si, pid), values in sorted(result.dumps.items()):
        path = outdir / dump_filename(si, pid)
        write_dump(path, values, si, pid, qp=qp)
        paths.append(path)
    return paths


def export_weights(path, result: TrainResult):
    write_weights_config(path, result.stage_weights)
    return Path(path)


def build_container(dump_dir, lut_path, preset, qp=0, check=True):
    """Assemble the binary LUT container with the filter engine's CLI."""
    cmd = FILTER_CLI + [
        "build-lut",
        "--preset", preset,
        "--qp", str(qp),
        "--from-dump", str(dump_dir),
        "-o", str(lut_path),
    ]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    if check and proc.returncode != 0:
        raise RuntimeError(f"filter CLI failed: {proc.stderr.strip()}")
    return proc


def export_all(outdir, result: TrainResult, qp=0):
    """Write dumps, weights config and the assembled container; return paths."""
    outdir = Path(outdir)
    dump_dir = outdir / "dumps"
    export_dumps(dump_dir, result, qp=qp)
    weights_path = export_weights(outdir / "weights.cfg", result)
    lut_path = outdir / f"trained_{result.preset}.lut"
    build_container(dump_dir, lut_path, result.preset, qp=qp)
    return {"dumps": dump_dir, "weights": weights_path, "lut": lut_path}
