"""Kernel lane selection: compiled extension if built, numpy fallback otherwise."""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("CHAOSBOOT_PURE"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

eval_spline = _impl.eval_spline
pivot_sums = _impl.pivot_sums
