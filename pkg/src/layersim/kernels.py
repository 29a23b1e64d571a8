"""Kernel backend selection.

The hot inner loops (layer counting, component labeling, crossing search,
peeling, the exact treewidth oracle) exist twice: compiled Cython kernels in
``layersim._kernels_c`` and reference Python/numpy kernels in
``layersim._kernels_py``.  The compiled module is preferred when importable;
set ``LAYERSIM_PURE=1`` to force the Python backend.  Both produce identical
outputs (cross-checked in tests), so the choice only affects speed.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("LAYERSIM_PURE"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels_c as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

BACKEND: str = _impl.BACKEND

layers_from_ages = _impl.layers_from_ages
masked_components = _impl.masked_components
grid_label = _impl.grid_label
crossing_parents = _impl.crossing_parents
monotone_sizes = _impl.monotone_sizes
monotone_from = _impl.monotone_from
peel_min_degree = _impl.peel_min_degree
treewidth_exact = _impl.treewidth_exact
balanced_separator_exists = _impl.balanced_separator_exists
separator_sweep = _impl.separator_sweep


def backend_name() -> str:
    """Which kernel implementation is active: "compiled" or "python"."""
    return BACKEND
