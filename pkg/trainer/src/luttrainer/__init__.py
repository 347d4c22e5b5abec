"""Offline trainer for filtering look-up tables.

Learns small per-pattern networks on degraded/clean image pairs, caches
them on the 17^4 input lattice, finetunes the cached tables through a
differentiable simplex-interpolation model, and exports everything in the
lutfilter interchange formats (lattice dumps, LUT container via the
lutfilter CLI, key=value weight config).
"""

__version__ = "0.1.0"
