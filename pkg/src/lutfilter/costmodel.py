"""Integer-operation and energy accounting for the filter presets.

Per-pixel operation vectors for the U and V presets are fixed published
data; frame-level numbers scale multiplicatively, the worst-case kMACs
figure is max(adds, multiplies)/1000, and the energy model is a dot
product with per-operation pJ costs.
"""

from __future__ import annotations

from dataclasses import dataclass

_INT64_MAX = 2**63 - 1


@dataclass(frozen=True)
class CostVector:
    """Per-pixel operation counts split by kind and integer width."""

    int8_add: int
    int8_mul: int
    int32_add: int
    int32_mul: int

    @property
    def total_add(self):
        return self.int8_add + self.int32_add

    @property
    def total_mul(self):
        return self.int8_mul + self.int32_mul

    def scaled(self, factor):
        return CostVector(
            self.int8_add * factor,
            self.int8_mul * factor,
            self.int32_add * factor,
            self.int32_mul * factor,
        )


@dataclass(frozen=True)
class EnergyTable:
    """pJ per operation (45 nm figures: int8 add/mul 0.03/0.2, int32 0.1/3.1)."""

    int8_add: float = 0.03
    int8_mul: float = 0.2
    int32_add: float = 0.1
    int32_mul: float = 3.1

    def __post_init__(self):
        if min(self.int8_add, self.int8_mul, self.int32_add, self.int32_mul) < 0:
            raise ValueError("energies must be non-negative")


DEFAULT_ENERGY = EnergyTable()

_PRESET_COSTS = {
    "U": CostVector(int8_add=70, int8_mul=4, int32_add=68, int32_mul=55),
    "V": CostVector(int8_add=206, int8_mul=4, int32_add=190, int32_mul=152),
}

# How the published reports print the raw kMACs figure: U truncates
# 0.138 -> 0.13 while V rounds 0.396 -> 0.40, so the display string is
# preset data, not a rounding rule.
PAPER_STYLE_KMACS = {"U": "0.13", "V": "0.40"}


class UnsupportedPresetCost(ValueError):
    pass


def preset_cost(name):
    """Published per-pixel CostVector for preset U or V.

    No per-pixel vector is published for F; callers may supply a custom
    vector or use analytic_cost.
    """
    try:
        return _PRESET_COSTS[name]
    except KeyError:
        raise UnsupportedPresetCost(
            f"no published per-pixel vector for preset {name!r} (only U, V)"
        ) from None


def frame_cost(cv: CostVector, width, height):
    """Frame-level counts: every per-pixel count times width*height."""
    if width < 1 or height < 1:
        raise ValueError("frame dimensions must be >= 1")
    pixels = width * height
    worst = max(cv.total_add, cv.total_mul)
    if worst and pixels > _INT64_MAX // worst:
        raise OverflowError("frame cost exceeds 64-bit range")
    return cv.scaled(pixels)


def kmacs(cv: CostVector):
    """Worst-case kMACs per pixel: max(total adds, total multiplies)/1000."""
    return max(cv.total_add, cv.total_mul) / 1000.0


def energy(cv: CostVector, table: EnergyTable = DEFAULT_ENERGY):
    """Energy in pJ: dot product of operation counts and per-op costs."""
    return (
        cv.int8_add * table.int8_add
        + cv.int8_mul * table.int8_mul
        + cv.int32_add * table.int32_add
        + cv.int32_mul * table.int32_mul
    )


def solve_int32_energies(table: EnergyTable = DEFAULT_ENERGY, totals=(180.2, 497.2)):
    """Solve the published U/V energy totals for the int32 add/mul costs.

    2x2 linear solve with the int8 costs fixed.  The published totals are
    rounded to one decimal, so the solution only approximates the defaults
    (0.1, 3.1); used by tests to sanity-check the hardcoded values.
    """
    u, v = _PRESET_COSTS["U"], _PRESET_COSTS["V"]
    bu = totals[0] - u.int8_add * table.int8_add - u.int8_mul * table.int8_mul
    bv = totals[1] - v.int8_add * table.int8_add - v.int8_mul * table.int8_mul
    det = u.int32_add * v.int32_mul - u.int32_mul * v.int32_add
    add = (bu * v.int32_mul - u.int32_mul * bv) / det
    mul = (u.int32_add * bv - bu * v.int32_add) / det
    return add, mul


def analytic_cost(preset):
    """Best-effort operation count derived from a preset's structure.

    Counts the retrieval arithmetic of the two-stage pipeline (per pattern
    and rotation: simplex weight construction, 5-term weighted sum with
    rounding, ensemble and mixing arithmetic).  Works for any preset,
    including custom ones, but is not calibrated against the published
    U/V vectors.
    """
    int8_add = int8_mul = int32_add = int32_mul = 0
    for stage in preset.stages:
        n = len(stage.patterns)
        per_retrieval_i8_add = 4  # successive LSB differences
        per_retrieval_i32_mul = 5  # weight * vertex value
        per_retrieval_i32_add = 5  # 4 accumulations + rounding offset
        retrievals = 4 * n
        int8_add += per_retrieval_i8_add * retrievals
        int32_mul += per_retrieval_i32_mul * retrievals
        int32_add += per_retrieval_i32_add * retrievals
        int32_add += 4 * n  # ensemble sums + rounding per pattern
        int32_mul += n  # pattern weight application
        int32_add += n  # mixing accumulation + rounding
        int8_mul += 1  # final scale/clamp arithmetic per stage
    return CostVector(int8_add, int8_mul, int32_add, int32_mul)


def report_lines(name, cv, width, height, table: EnergyTable = DEFAULT_ENERGY):
    """Plain-text cost report (pixel-wise, frame-wise, kMACs, energy)."""
    fc = frame_cost(cv, width, height)
    raw_kmacs = kmacs(cv)
    display = PAPER_STYLE_KMACS.get(name, f"{raw_kmacs:.2f}")
    lines = [
        f"preset: {name}",
        f"frame: {width}x{height}",
        "-- pixel-wise --",
        f"int8 add:      {cv.int8_add}",
        f"int8 multiply: {cv.int8_mul}",
        f"int32 add:      {cv.int32_add}",
        f"int32 multiply: {cv.int32_mul}",
        f"total add:      {cv.total_add}",
        f"total multiply: {cv.total_mul}",
        "-- frame-wise --",
        f"int8 add:      {fc.int8_add:,}",
        f"int8 multiply: {fc.int8_mul:,}",
        f"int32 add:      {fc.int32_add:,}",
        f"int32 multiply: {fc.int32_mul:,}",
        f"total add:      {fc.total_add:,}",
        f"total multiply: {fc.total_mul:,}",
        "-- summary --",
        f"worst-case kMACs/pixel: {display} (raw {raw_kmacs:.3f})",
        f"energy: {energy(cv, table):.1f} pJ/pixel (raw {energy(cv, table):.4f})",
    ]
    return lines


def report_kv(name, cv, width, height, table: EnergyTable = DEFAULT_ENERGY):
    """Machine-readable key=value form of the cost report."""
    fc = frame_cost(cv, width, height)
    return {
        "preset": name,
        "width": width,
        "height": height,
        "pixel.int8_add": cv.int8_add,
        "pixel.int8_mul": cv.int8_mul,
        "pixel.int32_add": cv.int32_add,
        "pixel.int32_mul": cv.int32_mul,
        "pixel.total_add": cv.total_add,
        "pixel.total_mul": cv.total_mul,
        "frame.int8_add": fc.int8_add,
        "frame.int8_mul": fc.int8_mul,
        "frame.int32_add": fc.int32_add,
        "frame.int32_mul": fc.int32_mul,
        "frame.total_add": fc.total_add,
        "frame.total_mul": fc.total_mul,
        "kmacs_per_pixel": kmacs(cv),
        "kmacs_display": PAPER_STYLE_KMACS.get(name, f"{kmacs(cv):.2f}"),
        "energy_pj_per_pixel": energy(cv, table),
    }
