# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled pair-counting kernels.

Both loops enumerate all N*(N-1)/2 unordered sample pairs exactly; this
is the hot path of the whole analysis (O(m^2 * N^2) per problem).
"""

from libc.math cimport fabs


def dominance_counts(double[:] vi, double[:] vj, double eps_tie):
    """Count (harmony, conflict, tie) pairs between two value vectors.

    A pair is a tie when either value difference is within eps_tie;
    otherwise harmony when the differences share a sign (one point
    improves both constraints) and conflict when they oppose.
    """
    cdef Py_ssize_t n = vi.shape[0]
    cdef Py_ssize_t a, b
    cdef double via, vja, di, dj
    cdef long long harmony = 0, conflict = 0, ties = 0
    if vj.shape[0] != n:
        raise ValueError("value vectors must have equal length")
    for a in range(n):
        via = vi[a]
        vja = vj[a]
        for b in range(a + 1, n):
            di = via - vi[b]
            dj = vja - vj[b]
            if fabs(di) <= eps_tie or fabs(dj) <= eps_tie:
                ties += 1
            elif (di > 0.0) == (dj > 0.0):
                harmony += 1
            else:
                conflict += 1
    return int(harmony), int(conflict), int(ties)


def crossing_count(double[:] vi, double[:] vj, double eps_tie):
    """Count pairs whose two-axis parallel-coordinate segments cross.

    The segment of point a runs from (axis i, vi[a]) to (axis j, vj[a]).
    Two segments cross exactly when the endpoint differences on the two
    axes have strictly opposite signs beyond eps_tie.
    """
    cdef Py_ssize_t n = vi.shape[0]
    cdef Py_ssize_t a, b
    cdef double via, vja, di, dj
    cdef long long crossings = 0
    if vj.shape[0] != n:
        raise ValueError("value vectors must have equal length")
    for a in range(n):
        via = vi[a]
        vja = vj[a]
        for b in range(a + 1, n):
            di = via - vi[b]
            dj = vja - vj[b]
            if (di > eps_tie and dj < -eps_tie) or (di < -eps_tie and dj > eps_tie):
                crossings += 1
    return int(crossings)
