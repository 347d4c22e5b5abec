"""Command-line surface: build-lut, filter, eval, cost, inspect."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import costmodel, kernels, lutio, rdo
from .core import ClippedLut, LutSet, preset as named_preset
from .pipeline import filter_plane
from .transfer import NAMED_ORACLES, cache_clipped_lut, make_affine_oracle


def _load_preset(name, config_path):
    pre = named_preset(name)
    if config_path:
        pre = lutio.apply_config(pre, lutio.load_config(config_path))
    return pre


def _resolve_oracle(spec):
    if spec in NAMED_ORACLES:
        return NAMED_ORACLES[spec]
    if spec.startswith("affine:"):
        parts = [float(x) for x in spec.removeprefix("affine:").split(",")]
        if len(parts) not in (4, 5):
            raise ValueError("affine oracle needs 4 coefficients and an optional bias")
        return make_affine_oracle(parts[:4], parts[4] if len(parts) == 5 else 0)
    raise ValueError(f"unknown oracle {spec!r} (try identity, mean, affine:c0,c1,c2,c3[,bias])")


def cmd_build_lut(args):
    pre = _load_preset(args.preset, args.config)
    luts = {}
    if args.from_dump:
        from pathlib import Path

        for si, stage in enumerate(pre.stages, start=1):
            for pattern in stage.patterns:
                path = Path(args.from_dump) / lutio.dump_filename(si, pattern.id)
                values, dsi, dpid, dqp = lutio.load_dump(path)
                if (dsi, dpid) != (si, pattern.id):
                    raise lutio.FormatError(
                        f"{path}: dump tagged stage {dsi} pattern {dpid}, expected {si}/{pattern.id}"
                    )
                luts[(si, pattern.id)] = ClippedLut(
                    values=values, pattern_id=pattern.id, stage_index=si, qp=args.qp
                )
    else:
        oracle = _resolve_oracle(args.oracle)
        for si, stage in enumerate(pre.stages, start=1):
            for pattern in stage.patterns:
                luts[(si, pattern.id)] = cache_clipped_lut(
                    oracle, pattern_id=pattern.id, stage_index=si, qp=args.qp
                )
    lut_set = LutSet(preset=pre, qp=args.qp, luts=luts)
    lutio.save_lutset(args.output, lut_set)
    print(f"wrote {args.output}: preset {pre.name}, qp {args.qp}, {pre.lut_count} LUTs")
    return 0


def _load_set_with_config(args):
    lut_set = lutio.load_lutset(args.lut)
    pre = lut_set.preset
    if args.config:
        pre = lutio.apply_config(pre, lutio.load_config(args.config))
        lut_set = LutSet(preset=pre, qp=lut_set.qp, luts=lut_set.luts)
    return lut_set


def cmd_filter(args):
    lut_set = _load_set_with_config(args)
    plane = lutio.read_pgm(args.input)
    filtered = filter_plane(plane, lut_set.preset, lut_set)
    if args.rdo:
        if not args.original:
            raise ValueError("--rdo needs --original")
        original = lutio.read_pgm(args.original)
        cfg = rdo.RdoConfig(ctu_size=args.ctu_size, lam=args.lam)
        flag_map, out, stats = rdo.decide(plane, filtered, original, cfg)
        if args.flag_grid:
            with open(args.flag_grid, "w") as f:
                f.write(flag_map.grid_text() + "\n")
        print(f"usage: {stats.n_test}/{stats.n_total} = {float(stats.ratio):.4f}")
        filtered = out
    lutio.write_pgm(args.output, filtered)
    print(f"wrote {args.output}")
    return 0


def cmd_eval(args):
    lut_set = _load_set_with_config(args)
    degraded = lutio.read_pgm(args.input)
    original = lutio.read_pgm(args.original)
    filtered = filter_plane(degraded, lut_set.preset, lut_set)
    cfg = rdo.RdoConfig(ctu_size=args.ctu_size, lam=args.lam)
    flag_map, out, stats = rdo.decide(degraded, filtered, original, cfg)
    print(f"psnr_before: {rdo.psnr(degraded, original):.4f} dB")
    print(f"psnr_filtered: {rdo.psnr(filtered, original):.4f} dB")
    print(f"psnr_after: {rdo.psnr(out, original):.4f} dB")
    print(f"usage: {stats.n_test}/{stats.n_total} = {float(stats.ratio):.4f}")
    if args.flag_grid:
        with open(args.flag_grid, "w") as f:
            f.write(flag_map.grid_text() + "\n")
    else:
        print(flag_map.grid_text())
    if args.output:
        lutio.write_pgm(args.output, out)
    return 0


def cmd_cost(args):
    cv = costmodel.preset_cost(args.preset)
    if args.format == "kv":
        for k, v in costmodel.report_kv(args.preset, cv, args.width, args.height).items():
            print(f"{k}={v}")
    else:
        for line in costmodel.report_lines(args.preset, cv, args.width, args.height):
            print(line)
    return 0


def cmd_inspect(args):
    header = lutio.read_lutset_header(args.lut)
    for k, v in header.items():
        print(f"{k}: {v}")
    lut_set = lutio.load_lutset(args.lut)
    for si, stage in enumerate(lut_set.preset.stages, start=1):
        for pattern in stage.patterns:
            offs = " ".join(f"({dy},{dx})" for dy, dx in pattern.offsets)
            print(f"stage {si} pattern {pattern.id}: {offs}")
    print(f"value_bytes: {lut_set.preset.lut_count * 17**4}")
    print(f"backend: {kernels.DEFAULT_BACKEND}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="lutfilter", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-lut", help="construct a LUT set from an oracle or dump dir")
    p.add_argument("--preset", choices=("U", "V", "F"), required=True)
    p.add_argument("--qp", type=int, default=0)
    p.add_argument("--oracle", default="identity")
    p.add_argument("--from-dump", metavar="DIR", help="load trainer lattice dumps instead of an oracle")
    p.add_argument("--config", help="key=value geometry/weight overrides")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_build_lut)

    p = sub.add_parser("filter", help="filter a PGM plane")
    p.add_argument("--lut", required=True)
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--config")
    p.add_argument("--rdo", action="store_true", help="per-CTU on/off decision against --original")
    p.add_argument("--original")
    p.add_argument("--lam", type=float, default=0.0)
    p.add_argument("--ctu-size", type=int, default=128)
    p.add_argument("--flag-grid", help="write the 0/1 CTU flag grid to this file")
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("eval", help="PSNR / usage-ratio report for a degraded/original pair")
    p.add_argument("--lut", required=True)
    p.add_argument("-i", "--input", required=True, help="degraded plane")
    p.add_argument("--original", required=True)
    p.add_argument("-o", "--output")
    p.add_argument("--config")
    p.add_argument("--lam", type=float, default=0.0)
    p.add_argument("--ctu-size", type=int, default=128)
    p.add_argument("--flag-grid")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("cost", help="operation-count / energy report")
    p.add_argument("--preset", choices=("U", "V"), required=True)
    p.add_argument("--width", type=int, default=1920)
    p.add_argument("--height", type=int, default=1080)
    p.add_argument("--format", choices=("text", "kv"), default="text")
    p.set_defaults(func=cmd_cost)

    p = sub.add_parser("inspect", help="dump LUT-set header metadata")
    p.add_argument("--lut", required=True)
    p.set_defaults(func=cmd_inspect)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
