"""File formats: PGM planes, the binary LUT-set container, lattice dumps
and the plain key=value config for geometry/weight overrides.

LUT-set container ("LILF", little-endian throughout):

    magic     4 bytes  b"LILF"
    version   u8       1
    preset    u8       ASCII U/V/F, or C for custom
    qp        i32
    lut_count u16
    records, lut_count times:
        stage_index u8
        pattern_id  u8
        offsets     4 x (i8 dy, i8 dx)
        values      83521 bytes, row-major over the 17^4 lattice
    checksum  u32      CRC-32 of all value bytes, in record order

Lattice dump ("LDMP"): u8 version 1, u8 stage_index, u8 pattern_id, i32 qp,
then 83521 value bytes.  Dumps are the hand-off format from the trainer.
"""

from __future__ import annotations

import struct
import zlib

import numpy as np

from .core import (
    LUT_BYTES,
    ClippedLut,
    LutSet,
    PatternGeometry,
    PipelinePreset,
    StageSpec,
    preset as named_preset,
    renormalize_weights,
)

LUT_MAGIC = b"LILF"
DUMP_MAGIC = b"LDMP"
FORMAT_VERSION = 1


class FormatError(ValueError):
    pass


# ---------------------------------------------------------------------------
# PGM (binary P5, maxval 255)

def read_pgm(path):
    with open(path, "rb") as f:
        data = f.read()
    fields = []
    pos = 0

    def next_token():
        nonlocal pos
        while pos < len(data):
            if data[pos : pos + 1].isspace():
                pos += 1
            elif data[pos : pos + 1] == b"#":
                while pos < len(data) and data[pos : pos + 1] != b"\n":
                    pos += 1
            else:
                break
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise FormatError(f"{path}: truncated PGM header")
        return data[start:pos]

    if next_token() != b"P5":
        raise FormatError(f"{path}: not a binary PGM (P5)")
    try:
        width = int(next_token())
        height = int(next_token())
        maxval = int(next_token())
    except ValueError:
        raise FormatError(f"{path}: malformed PGM header") from None
    if maxval != 255:
        raise FormatError(f"{path}: unsupported maxval {maxval} (need 255)")
    if width < 1 or height < 1:
        raise FormatError(f"{path}: bad dimensions {width}x{height}")
    pos += 1  # single whitespace after maxval
    raster = data[pos : pos + width * height]
    if len(raster) != width * height:
        raise FormatError(f"{path}: truncated raster")
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width).copy()


def write_pgm(path, plane):
    plane = np.ascontiguousarray(plane, dtype=np.uint8)
    if plane.ndim != 2:
        raise ValueError("plane must be 2D")
    h, w = plane.shape
    with open(path, "wb") as f:
        f.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        f.write(plane.tobytes())


# ---------------------------------------------------------------------------
# LUT-set container

def save_lutset(path, lut_set: LutSet):
    pre = lut_set.preset
    code = pre.name if pre.name in ("U", "V", "F") else "C"
    records = []
    crc = 0
    for si, stage in enumerate(pre.stages, start=1):
        for pattern in stage.patterns:
            lut = lut_set.lut(si, pattern.id)
            payload = lut.flat.tobytes()
            crc = zlib.crc32(payload, crc)
            rec = struct.pack("<BB", si, pattern.id)
            for dy, dx in pattern.offsets:
                rec += struct.pack("<bb", dy, dx)
            records.append(rec + payload)
    with open(path, "wb") as f:
        f.write(LUT_MAGIC)
        f.write(struct.pack("<BBiH", FORMAT_VERSION, ord(code), lut_set.qp, pre.lut_count))
        for rec in records:
            f.write(rec)
        f.write(struct.pack("<I", crc & 0xFFFFFFFF))


def read_lutset_header(path):
    """Header metadata without loading values: dict for `inspect`."""
    with open(path, "rb") as f:
        head = f.read(12)
    if len(head) < 12 or head[:4] != LUT_MAGIC:
        raise FormatError(f"{path}: bad magic")
    version, code, qp, count = struct.unpack("<BBiH", head[4:12])
    if version != FORMAT_VERSION:
        raise FormatError(f"{path}: unsupported version {version}")
    return {"version": version, "preset": chr(code), "qp": qp, "lut_count": count}


def load_lutset(path):
    with open(path, "rb") as f:
        data = f.read()
    if len(data) < 12 or data[:4] != LUT_MAGIC:
        raise FormatError(f"{path}: bad magic")
    version, code, qp, count = struct.unpack("<BBiH", data[4:12])
    if version != FORMAT_VERSION:
        raise FormatError(f"{path}: unsupported version {version}")
    pos = 12
    record_size = 2 + 8 + LUT_BYTES
    if len(data) != 12 + count * record_size + 4:
        raise FormatError(f"{path}: truncated or oversized file")
    crc = 0
    luts = {}
    geometry = {}
    for _ in range(count):
        si, pid = struct.unpack_from("<BB", data, pos)
        pos += 2
        offsets = []
        for _ in range(4):
            dy, dx = struct.unpack_from("<bb", data, pos)
            offsets.append((dy, dx))
            pos += 2
        payload = data[pos : pos + LUT_BYTES]
        pos += LUT_BYTES
        crc = zlib.crc32(payload, crc)
        try:
            pattern = PatternGeometry(pid, tuple(offsets))
        except ValueError as e:
            raise FormatError(f"{path}: invalid pattern geometry: {e}") from None
        if (si, pid) in luts:
            raise FormatError(f"{path}: duplicate record for stage {si} pattern {pid}")
        values = np.frombuffer(payload, dtype=np.uint8).copy()
        luts[(si, pid)] = ClippedLut(values=values, pattern_id=pid, stage_index=si, qp=qp)
        geometry.setdefault(si, []).append(pattern)
    (stored_crc,) = struct.unpack_from("<I", data, pos)
    if stored_crc != crc & 0xFFFFFFFF:
        raise FormatError(f"{path}: checksum mismatch")
    if sorted(geometry) != [1, 2]:
        raise FormatError(f"{path}: expected records for stages 1 and 2")
    name = chr(code)
    stages = tuple(
        StageSpec(patterns=tuple(geometry[si]), weights=(1,) * len(geometry[si]))
        for si in (1, 2)
    )
    pre = PipelinePreset(name=name if name in ("U", "V", "F") else "C", stages=stages)
    return LutSet(preset=pre, qp=qp, luts=luts)


# ---------------------------------------------------------------------------
# Lattice dumps

def save_dump(path, values, stage_index, pattern_id, qp=0):
    values = np.ascontiguousarray(values, dtype=np.uint8).reshape(-1)
    if values.size != LUT_BYTES:
        raise ValueError(f"dump needs {LUT_BYTES} values")
    with open(path, "wb") as f:
        f.write(DUMP_MAGIC)
        f.write(struct.pack("<BBBi", FORMAT_VERSION, stage_index, pattern_id, qp))
        f.write(values.tobytes())


def load_dump(path):
    """Returns (values, stage_index, pattern_id, qp)."""
    with open(path, "rb") as f:
        data = f.read()
    if len(data) != 4 + 7 + LUT_BYTES or data[:4] != DUMP_MAGIC:
        raise FormatError(f"{path}: not a lattice dump")
    version, si, pid, qp = struct.unpack_from("<BBBi", data, 4)
    if version != FORMAT_VERSION:
        raise FormatError(f"{path}: unsupported dump version {version}")
    values = np.frombuffer(data[11:], dtype=np.uint8).copy()
    return values, si, pid, qp


def dump_filename(stage_index, pattern_id):
    return f"stage{stage_index}_pattern{pattern_id}.dump"


# ---------------------------------------------------------------------------
# key=value config overrides

def parse_config(text):
    """Parse geometry/weight overrides.

    Recognized keys ('#' starts a comment):
        pattern.<id>      = dy,dx; dy,dx; dy,dx; dy,dx
        weights.stage<k>  = w1, w2, ...   (renormalized to the weight scale)
    """
    patterns = {}
    weights = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise FormatError(f"config line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key.startswith("pattern."):
            try:
                pid = int(key.split(".", 1)[1])
                offs = tuple(
                    tuple(int(c) for c in pair.split(","))
                    for pair in value.split(";")
                )
                patterns[pid] = PatternGeometry(pid, offs)
            except (ValueError, IndexError) as e:
                raise FormatError(f"config line {lineno}: {e}") from None
        elif key.startswith("weights.stage"):
            try:
                si = int(key.removeprefix("weights.stage"))
                weights[si] = tuple(int(w) for w in value.replace(",", " ").split())
            except ValueError as e:
                raise FormatError(f"config line {lineno}: {e}") from None
        else:
            raise FormatError(f"config line {lineno}: unknown key {key!r}")
    return {"patterns": patterns, "weights": weights}


def load_config(path):
    with open(path, "r", encoding="utf-8") as f:
        return parse_config(f.read())


def apply_config(pre: PipelinePreset, config):
    """Return a preset with config pattern/weight overrides applied."""
    stages = []
    for si, stage in enumerate(pre.stages, start=1):
        patterns = tuple(
            config["patterns"].get(p.id, p) for p in stage.patterns
        )
        weights = config["weights"].get(si, stage.weights)
        if len(weights) != len(patterns):
            raise FormatError(
                f"stage {si}: {len(weights)} weights for {len(patterns)} patterns"
            )
        weights = renormalize_weights(weights, stage.weight_scale)
        stages.append(StageSpec(patterns=patterns, weights=weights, weight_scale=stage.weight_scale))
    return PipelinePreset(name=pre.name, stages=tuple(stages))
