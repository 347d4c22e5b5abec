#!/usr/bin/env python3
"""Compare the pure-Python and compiled filtering backends.

Builds a V-preset LUT set, filters the same plane with each available
backend, checks the outputs are byte-identical and reports throughput.

Usage: python3 bench/benchmark.py [--size 512] [--preset V] [--repeats 3]
"""

import argparse
import time

import numpy as np

from lutfilter import kernels
from lutfilter.core import ClippedLut, LutSet, preset
from lutfilter.pipeline import filter_plane
from lutfilter.transfer import cache_clipped_lut, mean_oracle


def build_set(name):
    pre = preset(name)
    base = cache_clipped_lut(mean_oracle).values
    luts = {
        (si, p.id): ClippedLut(values=base, pattern_id=p.id, stage_index=si)
        for si, stage in enumerate(pre.stages, start=1)
        for p in stage.patterns
    }
    return pre, LutSet(preset=pre, qp=0, luts=luts)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", type=int, default=512)
    parser.add_argument("--preset", choices=("U", "V", "F"), default="V")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    pre, lut_set = build_set(args.preset)
    rng = np.random.default_rng(1)
    plane = rng.integers(0, 256, (args.size, args.size), dtype=np.uint8)
    pixels = plane.size

    print(f"preset {args.preset}, plane {args.size}x{args.size}, "
          f"backends: {', '.join(kernels.AVAILABLE_BACKENDS)}")

    results = {}
    times = {}
    for backend in kernels.AVAILABLE_BACKENDS:
        best = float("inf")
        for _ in range(args.repeats):
            t0 = time.perf_counter()
            out = filter_plane(plane, pre, lut_set, backend=backend)
            best = min(best, time.perf_counter() - t0)
        results[backend] = out
        times[backend] = best
        print(f"  {backend:>7}: {best * 1e3:8.1f} ms  ({pixels / best / 1e6:6.2f} Mpix/s)")

    outputs = list(results.values())
    identical = all(np.array_equal(outputs[0], o) for o in outputs[1:])
    print(f"outputs byte-identical: {identical}")
    if not identical:
        raise SystemExit("backend mismatch")
    if "python" in times and "cython" in times:
        print(f"speedup (compiled vs python): {times['python'] / times['cython']:.1f}x")


if __name__ == "__main__":
    main()
