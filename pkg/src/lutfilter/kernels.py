"""Kernel backend selection: compiled extension with pure-numpy fallback.

The compiled module is preferred when importable; set LUTFILTER_BACKEND to
"python" or "cython" to force one.  Both backends are exact integer
implementations and produce byte-identical planes.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py
from .pipeline_data import stage_arrays  # noqa: F401  (re-export convenience)

try:
    from . import _simplex as _compiled
except ImportError:
    _compiled = None

_forced = os.environ.get("LUTFILTER_BACKEND")
if _forced == "python":
    DEFAULT_BACKEND = "python"
elif _forced == "cython":
    if _compiled is None:
        raise ImportError("LUTFILTER_BACKEND=cython but the extension is not built")
    DEFAULT_BACKEND = "cython"
else:
    DEFAULT_BACKEND = "cython" if _compiled is not None else "python"

AVAILABLE_BACKENDS = ("python",) + (("cython",) if _compiled is not None else ())


def _impl(backend):
    backend = backend or DEFAULT_BACKEND
    if backend == "python":
        return _kernels_py
    if backend == "cython":
        if _compiled is None:
            raise ValueError("compiled backend requested but not built")
        return _compiled
    raise ValueError(f"unknown backend: {backend!r}")


def interp4d_many(lut_flat, q, backend=None):
    lut_flat = np.ascontiguousarray(lut_flat, dtype=np.uint8).reshape(-1)
    q = np.ascontiguousarray(q, dtype=np.int64)
    return _impl(backend).interp4d_many(lut_flat, q)


def filter_stage(plane, stage, luts, backend=None):
    """Filter a plane through one stage; luts maps pattern_id -> ClippedLut."""
    offsets, luts_flat, weights = stage_arrays(stage, luts)
    plane = np.ascontiguousarray(plane, dtype=np.uint8)
    return _impl(backend).filter_stage(plane, offsets, luts_flat, weights, stage.weight_scale)
