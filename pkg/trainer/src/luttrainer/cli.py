"""Trainer CLI: train tables, export them, and score the held-out set."""

from __future__ import annotations

import argparse
import sys

from .data import heldout_planes, training_planes
from .degrade import dct_quantize
from .evaluate import evaluate_heldout
from .export import export_all
from .train import TrainConfig, train_pipeline


def main(argv=None):
    parser = argparse.ArgumentParser(prog="luttrainer", description=__doc__)
    parser.add_argument("--preset", choices=("U", "V", "F"), default="V")
    parser.add_argument("--outdir", required=True)
    parser.add_argument("--degrade-step", type=float, default=24.0)
    parser.add_argument("--net-steps", type=int, default=400)
    parser.add_argument("--finetune-steps", type=int, default=400)
    parser.add_argument("--samples-per-image", type=int, default=16000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--skip-eval", action="store_true")
    args = parser.parse_args(argv)

    cfg = TrainConfig(
        preset=args.preset,
        degrade_step=args.degrade_step,
        net_steps=args.net_steps,
        finetune_steps=args.finetune_steps,
        samples_per_image=args.samples_per_image,
        seed=args.seed,
    )
    clean = training_planes()
    pairs = [(dct_quantize(plane, step=cfg.degrade_step), plane) for plane in clean.values()]
    print(f"training preset {cfg.preset} on {len(pairs)} planes "
          f"(degrade step {cfg.degrade_step})")
    result = train_pipeline(pairs, cfg)
    paths = export_all(args.outdir, result)
    print(f"exported: {paths['lut']} + {paths['weights']} + dumps in {paths['dumps']}")

    if not args.skip_eval:
        report = evaluate_heldout(
            paths["lut"], heldout_planes(), cfg.degrade_step, weights_config=paths["weights"]
        )
        gains = []
        for name, m in sorted(report.items()):
            gain = m["psnr_after"] - m["psnr_before"]
            gains.append(gain)
            print(f"  {name:8s} before {m['psnr_before']:6.2f} dB  "
                  f"after {m['psnr_after']:6.2f} dB  gain {gain:+5.3f} dB  "
                  f"usage {m['usage']:.2f}")
        print(f"mean gain: {sum(gains) / len(gains):+.3f} dB")
    return 0


if __name__ == "__main__":
    sys.exit(main())
