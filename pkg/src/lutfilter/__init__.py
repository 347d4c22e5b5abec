"""Clipped 4D LUT image filtering engine.

Replaces per-pixel network inference with lattice retrieval and 4-simplex
interpolation: multi-pattern reference indexing, two cascaded stages,
CTU-level rate-distortion decisions, and an integer-op cost model.
"""

from .core import (
    BINS_PER_DIM,
    LUT_BYTES,
    ClippedLut,
    LutSet,
    PatternGeometry,
    PipelinePreset,
    StageSpec,
    lattice_value,
    preset,
    storage_bytes,
)
from .interp import interp_2d, interp_4d, simplex_case, split_msb_lsb
from .pipeline import filter_pixel_stage, filter_plane, filter_stage, gather
from .rdo import RdoConfig, decide, psnr, ssd
from .transfer import build_full_lut, cache_clipped_lut, clipped_vs_full_report

__version__ = "0.1.0"

__all__ = [
    "BINS_PER_DIM",
    "LUT_BYTES",
    "ClippedLut",
    "LutSet",
    "PatternGeometry",
    "PipelinePreset",
    "StageSpec",
    "RdoConfig",
    "lattice_value",
    "preset",
    "storage_bytes",
    "split_msb_lsb",
    "simplex_case",
    "interp_2d",
    "interp_4d",
    "cache_clipped_lut",
    "build_full_lut",
    "clipped_vs_full_report",
    "gather",
    "filter_pixel_stage",
    "filter_stage",
    "filter_plane",
    "ssd",
    "psnr",
    "decide",
]
