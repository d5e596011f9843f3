"""Bounded many-constraint problems: loading, evaluation, sampling.

A problem is a set of box-bounded real variables, an optional objective,
and named constraints of kind "inequality" (g(x) <= 0) or "equality"
(h(x) = 0). The unified constraint value of constraint j at a point is
the raw g_j(x) or h_j(x); relationship analysis compares these values
between sample points.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import expr
from .expr import EvaluationError, ExprAst

__all__ = [
    "ProblemError",
    "SamplingError",
    "NonFiniteError",
    "INEQUALITY",
    "EQUALITY",
    "VariableSpec",
    "Constraint",
    "Problem",
    "Feasibility",
    "SampleSet",
    "load_problem",
    "load_problem_file",
    "problem_to_document",
    "constraint_value",
    "feasibility",
    "sample",
    "DEFAULT_EPS_FEAS",
    "DEFAULT_SAMPLES",
    "DEFAULT_STRATEGY",
]

INEQUALITY = "inequality"
EQUALITY = "equality"

DEFAULT_EPS_FEAS = 1e-6
DEFAULT_SAMPLES = 200
DEFAULT_STRATEGY = "lhs"

_STRATEGY_ALIASES = {
    "uniform": "uniform",
    "lhs": "lhs",
    "latin-hypercube": "lhs",
    "grid": "grid",
}


class ProblemError(Exception):
    """Invalid problem definition or malformed problem document."""


class SamplingError(Exception):
    """Invalid sampling request (bad strategy, too few points, bad grid size)."""


class NonFiniteError(Exception):
    """A constraint value came out non-finite at a concrete point."""


@dataclass(frozen=True)
class VariableSpec:
    name: str
    lower: float
    upper: float

    def __post_init__(self):
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise ProblemError(f"variable {self.name!r}: bounds must be finite")
        if not self.lower < self.upper:
            raise ProblemError(
                f"variable {self.name!r}: lower bound {self.lower} must be < upper bound {self.upper}"
            )


@dataclass(frozen=True)
class Constraint:
    name: str
    kind: str  # INEQUALITY or EQUALITY
    expr: ExprAst
    source: str  # original expression text, kept for lossless round-trips

    def __post_init__(self):
        if self.kind not in (INEQUALITY, EQUALITY):
            raise ProblemError(f"constraint {self.name!r}: unknown kind {self.kind!r}")


@dataclass(frozen=True)
class Problem:
    name: str
    variables: tuple[VariableSpec, ...]
    constraints: tuple[Constraint, ...]
    objective: Optional[ExprAst] = None
    objective_source: Optional[str] = None

    def __post_init__(self):
        if len(self.variables) == 0:
            raise ProblemError("a problem must declare at least one variable")
        if len(self.constraints) == 0:
            raise ProblemError("a problem must declare at least one constraint")
        seen = set()
        for spec in self.variables:
            if spec.name in seen:
                raise ProblemError(f"duplicate variable name {spec.name!r}")
            seen.add(spec.name)
        declared = frozenset(seen)
        names = set()
        for constraint in self.constraints:
            if constraint.name in names:
                raise ProblemError(f"duplicate constraint name {constraint.name!r}")
            names.add(constraint.name)
            stray = expr.syntactic_support(constraint.expr) - declared
            if stray:
                raise ProblemError(
                    f"constraint {constraint.name!r} references undeclared variable(s): "
                    + ", ".join(sorted(stray))
                )
        if self.objective is not None:
            stray = expr.syntactic_support(self.objective) - declared
            if stray:
                raise ProblemError(
                    "objective references undeclared variable(s): " + ", ".join(sorted(stray))
                )

    @property
    def dimension(self) -> int:
        return len(self.variables)

    @property
    def variable_names(self) -> tuple[str, ...]:
        return tuple(spec.name for spec in self.variables)

    @property
    def constraint_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.constraints)

    def constraint_index(self, name: str) -> int:
        for idx, constraint in enumerate(self.constraints):
            if constraint.name == name:
                return idx
        raise ProblemError(f"no constraint named {name!r}")

    def lower_bounds(self) -> np.ndarray:
        return np.array([spec.lower for spec in self.variables], dtype=float)

    def upper_bounds(self) -> np.ndarray:
        return np.array([spec.upper for spec in self.variables], dtype=float)

    def point_mapping(self, point: Sequence[float]) -> dict[str, float]:
        if len(point) != self.dimension:
            raise ProblemError(
                f"point has {len(point)} coordinates, problem has {self.dimension} variables"
            )
        return {spec.name: float(x) for spec, x in zip(self.variables, point)}


@dataclass(frozen=True)
class Feasibility:
    per_constraint: tuple[bool, ...]
    feasible: bool


@dataclass(frozen=True)
class SampleSet:
    """Seeded sample of the decision box plus the N x m constraint-value matrix."""

    points: np.ndarray  # shape (N, n)
    values: np.ndarray  # shape (N, m); values[a, j] = f_j(points[a])
    seed: int
    strategy: str

    def __post_init__(self):
        self.points.setflags(write=False)
        self.values.setflags(write=False)

    @property
    def count(self) -> int:
        return int(self.points.shape[0])


# ---------------------------------------------------------------------------
# Problem documents
# ---------------------------------------------------------------------------


def _parse_bound(raw, varname: str, which: str) -> float:
    if not isinstance(raw, (int, float)) or isinstance(raw, bool):
        raise ProblemError(f"variable {varname!r}: {which} bound must be a number")
    return float(raw)


def load_problem(document: str) -> Problem:
    """Parse and validate a JSON problem document.

    Expected shape::

        {"name": str,
         "variables": [{"name": str, "lower": num, "upper": num}, ...],
         "objective": str,                      # optional
         "constraints": [{"name": str, "kind": "inequality"|"equality",
                          "expr": str}, ...]}
    """
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ProblemError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ProblemError("problem document must be a JSON object")

    raw_vars = doc.get("variables")
    if not isinstance(raw_vars, list) or not raw_vars:
        raise ProblemError("problem must declare at least one variable")
    variables = []
    for entry in raw_vars:
        if not isinstance(entry, dict) or "name" not in entry:
            raise ProblemError("each variable needs a 'name', 'lower' and 'upper'")
        name = entry["name"]
        variables.append(
            VariableSpec(
                name=str(name),
                lower=_parse_bound(entry.get("lower"), name, "lower"),
                upper=_parse_bound(entry.get("upper"), name, "upper"),
            )
        )

    raw_cons = doc.get("constraints")
    if not isinstance(raw_cons, list) or not raw_cons:
        raise ProblemError("problem must declare at least one constraint")
    constraints = []
    for entry in raw_cons:
        if not isinstance(entry, dict) or "name" not in entry or "expr" not in entry:
            raise ProblemError("each constraint needs a 'name', 'kind' and 'expr'")
        name = str(entry["name"])
        kind = entry.get("kind", INEQUALITY)
        source = str(entry["expr"])
        try:
            ast = expr.parse(source)
        except expr.ParseError as exc:
            raise ProblemError(f"constraint {name!r}: {exc}") from None
        constraints.append(Constraint(name=name, kind=kind, expr=ast, source=source))

    objective = None
    objective_source = None
    if doc.get("objective") is not None:
        objective_source = str(doc["objective"])
        try:
            objective = expr.parse(objective_source)
        except expr.ParseError as exc:
            raise ProblemError(f"objective: {exc}") from None

    return Problem(
        name=str(doc.get("name", "")),
        variables=tuple(variables),
        constraints=tuple(constraints),
        objective=objective,
        objective_source=objective_source,
    )


def load_problem_file(path) -> Problem:
    with open(path, "r", encoding="utf-8") as handle:
        return load_problem(handle.read())


def problem_to_document(problem: Problem) -> dict:
    """Problem as the plain-dict form of the JSON problem document."""
    doc: dict = {
        "name": problem.name,
        "variables": [
            {"name": v.name, "lower": v.lower, "upper": v.upper} for v in problem.variables
        ],
    }
    if problem.objective_source is not None:
        doc["objective"] = problem.objective_source
    doc["constraints"] = [
        {"name": c.name, "kind": c.kind, "expr": c.source} for c in problem.constraints
    ]
    return doc


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def constraint_value(problem: Problem, j: int, point: Sequence[float]) -> float:
    """Unified constraint value f_j(x): the raw g_j or h_j, no absolute value."""
    constraint = problem.constraints[j]
    return expr.evaluate(constraint.expr, problem.point_mapping(point))


def feasibility(
    problem: Problem, point: Sequence[float], eps_feas: float = DEFAULT_EPS_FEAS
) -> Feasibility:
    """Per-constraint and overall feasibility at a point.

    Inequality j is feasible iff g_j(x) <= eps_feas; equality j iff
    |h_j(x)| <= eps_feas.
    """
    if eps_feas < 0:
        raise ValueError("eps_feas must be >= 0")
    mapping = problem.point_mapping(point)
    flags = []
    for constraint in problem.constraints:
        value = expr.evaluate(constraint.expr, mapping)
        if constraint.kind == INEQUALITY:
            flags.append(value <= eps_feas)
        else:
            flags.append(abs(value) <= eps_feas)
    return Feasibility(per_constraint=tuple(flags), feasible=all(flags))


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------


def _uniform_points(rng: np.random.Generator, count: int, lo: np.ndarray, hi: np.ndarray):
    return lo + rng.random((count, lo.size)) * (hi - lo)


def _lhs_points(rng: np.random.Generator, count: int, lo: np.ndarray, hi: np.ndarray):
    # one point per 1/count-width stratum, per coordinate
    n = lo.size
    unit = np.empty((count, n), dtype=float)
    for k in range(n):
        strata = rng.permutation(count)
        unit[:, k] = (strata + rng.random(count)) / count
    return lo + unit * (hi - lo)


def _grid_points(count: int, lo: np.ndarray, hi: np.ndarray):
    n = lo.size
    side = round(count ** (1.0 / n))
    # counter float fuzz in the root before rejecting
    for candidate in (side - 1, side, side + 1):
        if candidate >= 1 and candidate**n == count:
            side = candidate
            break
    else:
        raise SamplingError(f"grid strategy needs a perfect {n}-th power of points, got {count}")
    if side < 2:
        raise SamplingError("grid strategy needs at least 2 points per axis")
    axes = [np.linspace(lo[k], hi[k], side) for k in range(n)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def sample(
    problem: Problem,
    count: int = DEFAULT_SAMPLES,
    seed: int = 0,
    strategy: str = DEFAULT_STRATEGY,
) -> SampleSet:
    """Draw a deterministic, in-bounds sample and fill the value matrix.

    Strategies: "uniform", "lhs" (alias "latin-hypercube"), "grid" (count
    must be a perfect n-th power; includes the bound endpoints). The
    result is reproducible for a fixed (seed, strategy, count, problem).
    """
    canonical = _STRATEGY_ALIASES.get(strategy)
    if canonical is None:
        raise SamplingError(f"unknown sampling strategy {strategy!r}")
    if count < 2:
        raise SamplingError("pairwise analysis needs at least 2 samples")
    lo = problem.lower_bounds()
    hi = problem.upper_bounds()
    rng = np.random.default_rng(seed)
    if canonical == "uniform":
        points = _uniform_points(rng, count, lo, hi)
    elif canonical == "lhs":
        points = _lhs_points(rng, count, lo, hi)
    else:
        points = _grid_points(count, lo, hi)

    values = np.empty((count, len(problem.constraints)), dtype=float)
    for a in range(count):
        mapping = problem.point_mapping(points[a])
        for j, constraint in enumerate(problem.constraints):
            try:
                values[a, j] = expr.evaluate(constraint.expr, mapping)
            except EvaluationError as exc:
                raise NonFiniteError(
                    f"constraint {constraint.name!r} at point {points[a].tolist()}: {exc}"
                ) from exc
    return SampleSet(points=points, values=values, seed=int(seed), strategy=canonical)
