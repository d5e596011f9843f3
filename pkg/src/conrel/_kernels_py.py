"""Pure-Python (numpy) pair-counting kernels.

Drop-in fallback for the compiled extension; same contracts as
``conrel._kernels``. Materializes the N*(N-1)/2 difference vectors, so
it trades memory for not needing a compiler.
"""

from __future__ import annotations

import numpy as np


def _pair_differences(vi, vj):
    vi = np.asarray(vi, dtype=float)
    vj = np.asarray(vj, dtype=float)
    if vi.shape != vj.shape or vi.ndim != 1:
        raise ValueError("value vectors must have equal length")
    a, b = np.triu_indices(vi.size, k=1)
    return vi[a] - vi[b], vj[a] - vj[b]


def dominance_counts(vi, vj, eps_tie: float) -> tuple[int, int, int]:
    """Count (harmony, conflict, tie) pairs between two value vectors."""
    di, dj = _pair_differences(vi, vj)
    tie = (np.abs(di) <= eps_tie) | (np.abs(dj) <= eps_tie)
    same_sign = (di > 0) == (dj > 0)
    harmony = int(np.count_nonzero(~tie & same_sign))
    conflict = int(np.count_nonzero(~tie & ~same_sign))
    ties = int(np.count_nonzero(tie))
    return harmony, conflict, ties


def crossing_count(vi, vj, eps_tie: float) -> int:
    """Count pairs whose two-axis parallel-coordinate segments cross."""
    di, dj = _pair_differences(vi, vj)
    crossing = ((di > eps_tie) & (dj < -eps_tie)) | ((di < -eps_tie) & (dj > eps_tie))
    return int(np.count_nonzero(crossing))
