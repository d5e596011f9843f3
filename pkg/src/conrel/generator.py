"""Problem generators: canonical examples and planted ground truth.

The affine family plants provable pairwise labels: all constraints in a
block share one direction vector a over the block's variables, so
f_j = s_j * (a . x) + b_j with s_j in {+1, -1}. Two constraints in the
same block are in total harmony iff their signs agree and total
conflict iff they differ, for every non-tied point pair; constraints in
different blocks use disjoint variables and are independent. That makes
the planted labels exact, not sampled, so they can validate the
classifiers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

import numpy as np

from . import expr
from .problem import Constraint, INEQUALITY, Problem, VariableSpec
from .relations import Relation

__all__ = [
    "GeneratorError",
    "UnrealizablePlanError",
    "PlantedProblem",
    "conflict_example",
    "harmony_example",
    "independence_example",
    "merged_example",
    "example_suite",
    "generate_affine",
    "labels_document",
]

PlanLike = Union[str, Relation, Mapping[tuple[int, int], Relation]]

_EXAMPLE_BOUND = 3.0
_AFFINE_BOUND = 5.0
_MIN_COEFF = 0.1


class GeneratorError(Exception):
    """Invalid generator arguments."""


class UnrealizablePlanError(GeneratorError):
    """The requested pair labels cannot coexist on any affine problem."""


@dataclass(frozen=True)
class PlantedProblem:
    problem: Problem
    planted_labels: dict[tuple[int, int], Relation]


# ---------------------------------------------------------------------------
# Canonical two-constraint examples
# ---------------------------------------------------------------------------


def _two_var_problem(name: str, sources: list[str], bound: float = _EXAMPLE_BOUND) -> Problem:
    variables = (
        VariableSpec("x1", -bound, bound),
        VariableSpec("x2", -bound, bound),
    )
    constraints = tuple(
        Constraint(name=source, kind=INEQUALITY, expr=expr.parse(source), source=source)
        for source in sources
    )
    return Problem(name=name, variables=variables, constraints=constraints)


def conflict_example() -> Problem:
    """Two constraints whose values always move in opposite directions."""
    return _two_var_problem(
        "conflict-pair",
        ["x1*exp(-x1^2-x2^2)", "-0.1-x1*exp(-x1^2-x2^2)"],
    )


def harmony_example() -> Problem:
    """Two constraints whose values always move together; the looser one
    is redundant."""
    return _two_var_problem("harmony-pair", ["-x1+x2", "-x1+x2+1"])


def independence_example() -> Problem:
    """Two constraints on disjoint variables."""
    return _two_var_problem("independence-pair", ["2*sin(x1)-1", "x2^2-1"])


def merged_example() -> Problem:
    """All six example constraints in one problem."""
    return _two_var_problem(
        "merged-pairs",
        [
            "x1*exp(-x1^2-x2^2)",
            "-0.1-x1*exp(-x1^2-x2^2)",
            "-x1+x2",
            "-x1+x2+1",
            "2*sin(x1)-1",
            "x2^2-1",
        ],
    )


def example_suite() -> list[Problem]:
    """The conflict, harmony and independence examples, in that order."""
    return [conflict_example(), harmony_example(), independence_example()]


# ---------------------------------------------------------------------------
# Planted affine problems
# ---------------------------------------------------------------------------


def _parse_plan(plan: PlanLike, m: int):
    """Normalize to "random" or a pair->Relation mapping with 0-based keys."""
    if isinstance(plan, str) and plan.lower() == "random":
        return "random"
    if isinstance(plan, (str, Relation)):
        token = str(plan).upper()
        aliases = {
            "TH": Relation.TOTAL_HARMONY,
            "TOTAL_HARMONY": Relation.TOTAL_HARMONY,
            "TC": Relation.TOTAL_CONFLICT,
            "TOTAL_CONFLICT": Relation.TOTAL_CONFLICT,
            "IND": Relation.INDEPENDENT,
            "INDEPENDENT": Relation.INDEPENDENT,
        }
        if token not in aliases:
            raise GeneratorError(f"unknown plan {plan!r}")
        label = aliases[token]
        return {
            (i, j): label for i in range(m) for j in range(i + 1, m)
        }
    normalized: dict[tuple[int, int], Relation] = {}
    for pair, label in plan.items():
        i, j = pair
        if not (0 <= i < m and 0 <= j < m) or i == j:
            raise GeneratorError(f"plan pair {pair} out of range for m={m}")
        key = (i, j) if i < j else (j, i)
        label = Relation(label)
        if label not in (
            Relation.TOTAL_HARMONY,
            Relation.TOTAL_CONFLICT,
            Relation.INDEPENDENT,
        ):
            raise GeneratorError(f"plan label {label} is not plantable")
        if key in normalized and normalized[key] != label:
            raise UnrealizablePlanError(f"conflicting labels requested for pair {key}")
        normalized[key] = label
    return normalized


def _solve_plan(plan: dict[tuple[int, int], Relation], n: int, m: int):
    """Turn pair labels into (block id, sign) per constraint, or raise."""
    parent = list(range(m))
    parity = [0] * m

    def find(x: int) -> tuple[int, int]:
        p = 0
        while parent[x] != x:
            p ^= parity[x]
            x = parent[x]
        return x, p

    for (i, j), label in plan.items():
        if label is Relation.INDEPENDENT:
            continue
        sign = 0 if label is Relation.TOTAL_HARMONY else 1
        ri, pi = find(i)
        rj, pj = find(j)
        if ri == rj:
            if pi ^ pj != sign:
                raise UnrealizablePlanError(
                    f"pair ({i + 1}, {j + 1}) label {label.value} contradicts the other labels"
                )
        else:
            parent[rj] = ri
            parity[rj] = pi ^ pj ^ sign
    for (i, j), label in plan.items():
        if label is Relation.INDEPENDENT and find(i)[0] == find(j)[0]:
            raise UnrealizablePlanError(
                f"pair ({i + 1}, {j + 1}) cannot be independent: linked through total labels"
            )

    roots = sorted({find(i)[0] for i in range(m)})
    if len(roots) > n:
        raise UnrealizablePlanError(
            f"plan needs {len(roots)} disjoint variable blocks but only {n} variables exist"
        )
    block_of = {root: b for b, root in enumerate(roots)}
    blocks = [block_of[find(i)[0]] for i in range(m)]
    signs = [1 if find(i)[1] == 0 else -1 for i in range(m)]
    return blocks, signs, len(roots)


def _random_structure(rng: np.random.Generator, n: int, m: int):
    k = int(rng.integers(1, min(n, m) + 1))
    blocks = [0] * m
    order = rng.permutation(m)
    for b in range(k):
        blocks[order[b]] = b
    for idx in order[k:]:
        blocks[idx] = int(rng.integers(0, k))
    signs = [int(s) for s in rng.choice([-1, 1], size=m)]
    return blocks, signs, k


def _format_affine(coefficients: list[tuple[float, str]], offset: float) -> str:
    pieces: list[str] = []
    for value, name in coefficients:
        magnitude = f"{abs(value)!r}*{name}"
        if not pieces:
            pieces.append(("-" if value < 0 else "") + magnitude)
        else:
            pieces.append(("-" if value < 0 else "+") + magnitude)
    if offset != 0.0 or not pieces:
        pieces.append(("-" if offset < 0 else "+" if pieces else "") + repr(abs(offset)))
    return "".join(pieces)


def generate_affine(n: int, m: int, seed: int, plan: PlanLike = "random") -> PlantedProblem:
    """Planted affine problem with exact pairwise labels.

    `plan` is "random", a single label (applied to every pair), or a
    mapping from 0-based index pairs to labels; pairs left out of a
    mapping fall into whatever the block structure implies. Requested
    labels must be jointly realizable (independent pairs need disjoint
    blocks, total labels must be sign-consistent), otherwise
    UnrealizablePlanError is raised.
    """
    if n < 2 or m < 2:
        raise GeneratorError("affine plants need n >= 2 and m >= 2")
    rng = np.random.default_rng(seed)
    resolved = _parse_plan(plan, m)
    if resolved == "random":
        blocks, signs, k = _random_structure(rng, n, m)
    else:
        blocks, signs, k = _solve_plan(resolved, n, m)

    # spread variables over blocks: one each, remainder round-robin
    variables_of: list[list[int]] = [[] for _ in range(k)]
    for v in range(n):
        variables_of[v % k].append(v)

    directions = []
    for b in range(k):
        size = len(variables_of[b])
        magnitudes = _MIN_COEFF + (1.0 - _MIN_COEFF) * rng.random(size)
        direction_signs = rng.choice([-1.0, 1.0], size=size)
        directions.append(magnitudes * direction_signs)

    variable_specs = tuple(
        VariableSpec(f"x{v + 1}", -_AFFINE_BOUND, _AFFINE_BOUND) for v in range(n)
    )
    constraints = []
    for j in range(m):
        b = blocks[j]
        offset = float(rng.uniform(-1.0, 1.0))
        coefficients = [
            (signs[j] * float(directions[b][t]), f"x{v + 1}")
            for t, v in enumerate(variables_of[b])
        ]
        source = _format_affine(coefficients, offset)
        constraints.append(
            Constraint(name=f"c{j + 1}", kind=INEQUALITY, expr=expr.parse(source), source=source)
        )
    problem = Problem(
        name=f"affine-n{n}-m{m}-seed{seed}",
        variables=variable_specs,
        constraints=tuple(constraints),
    )

    planted: dict[tuple[int, int], Relation] = {}
    for i in range(m):
        for j in range(i + 1, m):
            if blocks[i] != blocks[j]:
                planted[(i, j)] = Relation.INDEPENDENT
            elif signs[i] == signs[j]:
                planted[(i, j)] = Relation.TOTAL_HARMONY
            else:
                planted[(i, j)] = Relation.TOTAL_CONFLICT
    return PlantedProblem(problem=problem, planted_labels=planted)


def labels_document(planted: PlantedProblem) -> dict:
    """Sidecar document for the planted labels."""
    names = planted.problem.constraint_names
    return {
        "pairs": [
            {"i": names[i], "j": names[j], "label": label.value}
            for (i, j), label in sorted(planted.planted_labels.items())
        ]
    }
