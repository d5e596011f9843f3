"""Kernel backend selection.

Prefers the compiled extension and falls back to the numpy
implementation when it is unavailable. Set CONREL_PURE_PYTHON=1 to
force the fallback (used by the benchmark and tests).
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

if os.environ.get("CONREL_PURE_PYTHON"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:  # pragma: no cover - depends on build environment
        _impl = _kernels_py
        BACKEND = "python"

__all__ = ["BACKEND", "dominance_counts", "crossing_count"]


def dominance_counts(vi, vj, eps_tie: float) -> tuple[int, int, int]:
    vi = np.ascontiguousarray(vi, dtype=float)
    vj = np.ascontiguousarray(vj, dtype=float)
    return _impl.dominance_counts(vi, vj, eps_tie)


def crossing_count(vi, vj, eps_tie: float) -> int:
    vi = np.ascontiguousarray(vi, dtype=float)
    vj = np.ascontiguousarray(vj, dtype=float)
    return _impl.crossing_count(vi, vj, eps_tie)
