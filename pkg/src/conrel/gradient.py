"""Gradient-based relationship magnitudes.

A pair of constraint gradients is unit-normalized and decomposed along
and across the bisector of the two directions: the component along the
bisector has length cos(theta/2) and measures harmony, the
perpendicular component has length sin(theta/2) and measures conflict.
Equal directions give (1, 0), opposite directions (0, 1), and a zero
gradient leaves the direction (and both magnitudes) undefined.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import expr
from .problem import Problem, SampleSet

__all__ = [
    "GradientDecomposition",
    "GradientAggregate",
    "StencilError",
    "DEFAULT_STEP",
    "NORM_FLOOR",
    "gradient",
    "gradient_matrix",
    "angle_decomposition",
    "aggregate_decompositions",
    "gradient_relationship",
]

DEFAULT_STEP = 1e-5
NORM_FLOOR = 1e-12

SYMBOLIC = "symbolic"
CENTRAL_DIFFERENCE = "fd"

_MODE_ALIASES = {
    "symbolic": SYMBOLIC,
    "fd": CENTRAL_DIFFERENCE,
    "central-difference": CENTRAL_DIFFERENCE,
}


class StencilError(Exception):
    """Point too close to the bounds for the central-difference stencil."""


@dataclass(frozen=True)
class GradientDecomposition:
    angle: Optional[float]  # radians in [0, pi]; None when undefined
    harmony_magnitude: Optional[float]
    conflict_magnitude: Optional[float]
    degenerate: bool  # zero gradient, or exactly antiparallel directions

    @property
    def defined(self) -> bool:
        return self.harmony_magnitude is not None


@dataclass(frozen=True)
class GradientAggregate:
    mean_harmony: Optional[float]
    mean_conflict: Optional[float]
    degenerate_points: int  # points with an undefined decomposition (zero gradient)
    used_points: int


@functools.lru_cache(maxsize=None)
def _partials(ast: expr.ExprAst, variable_names: tuple[str, ...]) -> tuple[expr.ExprAst, ...]:
    return tuple(expr.differentiate(ast, name) for name in variable_names)


def gradient(
    problem: Problem,
    j: int,
    point: Sequence[float],
    mode: str = SYMBOLIC,
    step: float = DEFAULT_STEP,
) -> np.ndarray:
    """Gradient of constraint j at a point.

    Symbolic mode differentiates the constraint expression exactly;
    central-difference mode uses (f(x + h e_k) - f(x - h e_k)) / 2h and
    requires the point to sit at least `step` inside every bound.
    """
    canonical = _MODE_ALIASES.get(mode)
    if canonical is None:
        raise ValueError(f"unknown gradient mode {mode!r}")
    constraint = problem.constraints[j]
    names = problem.variable_names
    if canonical == SYMBOLIC:
        mapping = problem.point_mapping(point)
        parts = _partials(constraint.expr, names)
        return np.array([expr.evaluate(d, mapping) for d in parts], dtype=float)

    if step <= 0:
        raise ValueError("step must be positive")
    x = np.asarray(point, dtype=float)
    lo = problem.lower_bounds()
    hi = problem.upper_bounds()
    if np.any(x - lo < step) or np.any(hi - x < step):
        raise StencilError(
            f"point {x.tolist()} is within {step} of a bound; the central-difference "
            "stencil needs interior margin"
        )
    grad = np.empty(x.size, dtype=float)
    for k in range(x.size):
        forward = x.copy()
        backward = x.copy()
        forward[k] += step
        backward[k] -= step
        f_plus = expr.evaluate(constraint.expr, problem.point_mapping(forward))
        f_minus = expr.evaluate(constraint.expr, problem.point_mapping(backward))
        grad[k] = (f_plus - f_minus) / (2.0 * step)
    return grad


def angle_decomposition(gi: Sequence[float], gj: Sequence[float]) -> GradientDecomposition:
    """Decompose a gradient pair into harmony/conflict magnitudes.

    Invariant to positive rescaling of either vector and symmetric in
    its arguments. Antiparallel directions are flagged degenerate with
    magnitudes (0, 1) by convention; a (near-)zero vector is flagged
    degenerate with both magnitudes undefined.
    """
    u = np.asarray(gi, dtype=float)
    v = np.asarray(gj, dtype=float)
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu < NORM_FLOOR or nv < NORM_FLOOR:
        return GradientDecomposition(
            angle=None, harmony_magnitude=None, conflict_magnitude=None, degenerate=True
        )
    u = u / nu
    v = v / nv
    sum_norm = float(np.linalg.norm(u + v))
    diff_norm = float(np.linalg.norm(u - v))
    if sum_norm < NORM_FLOOR:
        return GradientDecomposition(
            angle=math.pi, harmony_magnitude=0.0, conflict_magnitude=1.0, degenerate=True
        )
    angle = 2.0 * math.atan2(diff_norm, sum_norm)
    # components of either unit vector along / across the bisector
    harmony = sum_norm / 2.0
    conflict = diff_norm / 2.0
    return GradientDecomposition(
        angle=angle, harmony_magnitude=harmony, conflict_magnitude=conflict, degenerate=False
    )


def gradient_matrix(
    problem: Problem,
    j: int,
    samples: SampleSet,
    mode: str = SYMBOLIC,
    step: float = DEFAULT_STEP,
) -> np.ndarray:
    """Gradient of constraint j at every sample point, shape (N, n)."""
    return np.array(
        [gradient(problem, j, samples.points[a], mode=mode, step=step)
         for a in range(samples.count)]
    )


def aggregate_decompositions(gi_rows: np.ndarray, gj_rows: np.ndarray) -> GradientAggregate:
    """Average the per-point decompositions of two gradient matrices.

    Points where either gradient vanishes have no direction and are
    excluded from the means (and counted); antiparallel points carry
    their convention magnitudes (0, 1) and stay in the average. When no
    point yields a defined decomposition the means are None.
    """
    harmony_sum = 0.0
    conflict_sum = 0.0
    used = 0
    undefined = 0
    for gi, gj in zip(gi_rows, gj_rows):
        decomposition = angle_decomposition(gi, gj)
        if not decomposition.defined:
            undefined += 1
            continue
        harmony_sum += decomposition.harmony_magnitude
        conflict_sum += decomposition.conflict_magnitude
        used += 1
    if used == 0:
        return GradientAggregate(
            mean_harmony=None, mean_conflict=None, degenerate_points=undefined, used_points=0
        )
    return GradientAggregate(
        mean_harmony=harmony_sum / used,
        mean_conflict=conflict_sum / used,
        degenerate_points=undefined,
        used_points=used,
    )


def gradient_relationship(
    problem: Problem,
    i: int,
    j: int,
    samples: SampleSet,
    mode: str = SYMBOLIC,
    step: float = DEFAULT_STEP,
) -> GradientAggregate:
    """Mean harmony/conflict magnitudes for one constraint pair."""
    if i == j:
        raise ValueError("a constraint cannot be paired with itself")
    gi_rows = gradient_matrix(problem, i, samples, mode=mode, step=step)
    gj_rows = gradient_matrix(problem, j, samples, mode=mode, step=step)
    return aggregate_decompositions(gi_rows, gj_rows)
