"""Writers for the lutfilter interchange formats.

These are deliberately independent implementations of the documented file
layouts (the trainer talks to the filter engine only through files and its
CLI):

    lattice dump: b"LDMP", u8 version 1, u8 stage_index, u8 pattern_id,
                  i32 qp (little-endian), then 83521 value bytes in
                  row-major order over the 17^4 lattice.
    PGM:          binary P5, maxval 255.
    config:       key=value lines; `weights.stage<k> = w1, w2, ...`
                  with integer weights summing to the fixed-point scale.
"""

from __future__ import annotations

import struct

import numpy as np

DUMP_MAGIC = b"LDMP"
FORMAT_VERSION = 1
LATTICE_BINS = 17
LUT_VALUES = LATTICE_BINS**4  # 83521
WEIGHT_SCALE = 256


def lattice_sample(b):
    """8-bit sample for lattice bin b: 0,16,...,240 and 255 at the top."""
    if not 0 <= b < LATTICE_BINS:
        raise ValueError(f"lattice bin {b} out of range")
    return min(16 * b, 255)


def dump_filename(stage_index, pattern_id):
    return f"stage{stage_index}_pattern{pattern_id}.dump"


def write_dump(path, values, stage_index, pattern_id, qp=0):
    values = np.ascontiguousarray(values, dtype=np.uint8).reshape(-1)
    if values.size != LUT_VALUES:
        raise ValueError(f"dump needs {LUT_VALUES} values, got {values.size}")
    with open(path, "wb") as f:
        f.write(DUMP_MAGIC)
        f.write(struct.pack("<BBBi", FORMAT_VERSION, stage_index, pattern_id, qp))
        f.write(values.tobytes())


def write_pgm(path, plane):
    plane = np.ascontiguousarray(plane, dtype=np.uint8)
    if plane.ndim != 2:
        raise ValueError("plane must be 2D")
    h, w = plane.shape
    with open(path, "wb") as f:
        f.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        f.write(plane.tobytes())


def read_pgm(path):
    with open(path, "rb") as f:
        magic = f.readline().split()[0]
        if magic != b"P5":
            raise ValueError(f"{path}: not a binary PGM")
        fields = []
        while len(fields) < 3:
            line = f.readline()
            if not line:
                raise ValueError(f"{path}: truncated header")
            fields += line.split(b"#", 1)[0].split()
        w, h, maxval = (int(x) for x in fields)
        if maxval != 255:
            raise ValueError(f"{path}: unsupported maxval {maxval}")
        raster = f.read(w * h)
    if len(raster) != w * h:
        raise ValueError(f"{path}: truncated raster")
    return np.frombuffer(raster, dtype=np.uint8).reshape(h, w).copy()


def quantize_weights(fractions, scale=WEIGHT_SCALE):
    """Largest-remainder quantization of non-negative fractions to `scale`.

    The result sums exactly to `scale`, so the filter engine's own
    renormalization of the config file is the identity.
    """
    fractions = np.asarray(fractions, dtype=np.float64)
    if fractions.min() < 0 or fractions.sum() <= 0:
        raise ValueError("fractions must be non-negative with positive sum")
    exact = fractions / fractions.sum() * scale
    floors = np.floor(exact).astype(int)
    short = scale - floors.sum()
    order = np.argsort(-(exact - floors), kind="stable")
    for i in order[:short]:
        floors[i] += 1
    return tuple(int(w) for w in floors)


def write_weights_config(path, stage_weights):
    """Write `weights.stage<k> = ...` lines for a {stage: weights} dict."""
    lines = ["# learned pattern-mixing weights"]
    for si in sorted(stage_weights):
        ws = ", ".join(str(int(w)) for w in stage_weights[si])
        lines.append(f"weights.stage{si} = {ws}")
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")
