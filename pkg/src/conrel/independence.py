"""Independence between constraints via variable supports.

Two constraints are independent when neither reacts to the variables
the other reacts to. The syntactic test intersects the variable names
appearing in the two expressions; the effective test perturbs each
variable at the sample points and watches the constraint value, which
also catches algebraic cancellations like ``x2 - x2``.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import expr
from .problem import Problem, SampleSet

__all__ = [
    "DEFAULT_PROBE_SCALE",
    "DEFAULT_EPS_VALUE",
    "IndependenceVerdict",
    "effective_support",
    "independence_verdict",
]

# probe step as a fraction of each variable's range
DEFAULT_PROBE_SCALE = 0.01
DEFAULT_EPS_VALUE = 1e-9


@dataclass(frozen=True)
class IndependenceVerdict:
    i: int
    j: int
    syntactic_independent: bool
    effective_independent: bool
    effective_supports: tuple[frozenset[str], frozenset[str]]


def effective_support(
    problem: Problem,
    j: int,
    samples: SampleSet,
    probe_delta: float | None = None,
    eps_value: float = DEFAULT_EPS_VALUE,
) -> frozenset[str]:
    """Variables whose perturbation changes constraint j somewhere in the sample.

    Probes x_k +/- delta (clamped into bounds) at every sample point and
    keeps variable k once any probe moves the value by more than
    eps_value. Only variables in the syntactic support are probed, so
    the result is always a subset of it. `probe_delta` overrides the
    default of 1% of each variable's range.
    """
    if probe_delta is not None and probe_delta <= 0:
        raise ValueError("probe_delta must be positive")
    if samples.count == 0:
        raise ValueError("effective support needs a non-empty sample")
    constraint = problem.constraints[j]
    candidates = expr.syntactic_support(constraint.expr)
    if not candidates:
        return frozenset()
    index_of = {name: k for k, name in enumerate(problem.variable_names)}
    found: set[str] = set()
    for name in sorted(candidates):
        k = index_of[name]
        spec = problem.variables[k]
        delta = probe_delta if probe_delta is not None else (spec.upper - spec.lower) * DEFAULT_PROBE_SCALE
        for a in range(samples.count):
            point = samples.points[a].tolist()
            base = samples.values[a, j]
            moved = False
            for signed in (delta, -delta):
                probed = min(max(point[k] + signed, spec.lower), spec.upper)
                if probed == point[k]:
                    continue
                shifted = list(point)
                shifted[k] = probed
                value = expr.evaluate(constraint.expr, problem.point_mapping(shifted))
                if abs(value - base) > eps_value:
                    moved = True
                    break
            if moved:
                found.add(name)
                break
    return frozenset(found)


def independence_verdict(
    problem: Problem,
    i: int,
    j: int,
    samples: SampleSet,
    probe_delta: float | None = None,
    eps_value: float = DEFAULT_EPS_VALUE,
) -> IndependenceVerdict:
    """Syntactic and effective independence for constraints i and j."""
    if i == j:
        raise ValueError("a constraint cannot be paired with itself")
    syntactic_i = expr.syntactic_support(problem.constraints[i].expr)
    syntactic_j = expr.syntactic_support(problem.constraints[j].expr)
    effective_i = effective_support(problem, i, samples, probe_delta, eps_value)
    effective_j = effective_support(problem, j, samples, probe_delta, eps_value)
    return IndependenceVerdict(
        i=i,
        j=j,
        syntactic_independent=syntactic_i.isdisjoint(syntactic_j),
        effective_independent=effective_i.isdisjoint(effective_j),
        effective_supports=(effective_i, effective_j),
    )
