"""Relationship graph over constraints: assembly, transitivity, pruning.

Measured pairwise verdicts become labeled edges. Total relationships
compose along paths like signs (+1 for total harmony, -1 for total
conflict), so unmeasured pairs inside one connected component of total
edges get an inferred label from the sign product, and a measured total
edge that disagrees with the sign product of a path between its
endpoints is a contradiction (an odd cycle in the signed graph). Chains
longer than two edges are a closure of the pairwise composition rules;
reports flag this as an extension.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .independence import IndependenceVerdict
from .pairwise import PairVerdict
from .problem import DEFAULT_EPS_FEAS, INEQUALITY, Problem, SampleSet
from .relations import Relation

__all__ = [
    "GraphError",
    "Edge",
    "RelationshipGraph",
    "InferredEdge",
    "Contradiction",
    "InferenceResult",
    "RedundancyFlag",
    "SubProblem",
    "Decomposition",
    "build_graph",
    "infer_transitive",
    "apply_inference",
    "detect_redundancy",
    "decompose",
]

MEASURED = "measured"
INFERRED = "inferred"

_TOTAL_LABELS = (Relation.TOTAL_HARMONY, Relation.TOTAL_CONFLICT)


class GraphError(Exception):
    """Inconsistent graph construction (duplicate edges, bad indices)."""


@dataclass
class Edge:
    label: Relation
    provenance: str = MEASURED
    harmony_magnitude: Optional[float] = None
    conflict_magnitude: Optional[float] = None
    # pairwise label retained when independence overrides it
    pairwise_label: Optional[Relation] = None
    witness: Optional[tuple[int, ...]] = None


class RelationshipGraph:
    """Constraints as nodes, one labeled edge per unordered pair.

    Edges keep insertion order, which fixes the order transitive
    inference walks them in; analysis pipelines insert pairs in
    row-major (i, j) order, making results reproducible.
    """

    def __init__(self, m: int, names: Optional[Sequence[str]] = None):
        if m < 1:
            raise GraphError("graph needs at least one node")
        if names is not None and len(names) != m:
            raise GraphError("names must match the node count")
        self.m = m
        self.names = tuple(names) if names is not None else None
        self.edges: dict[tuple[int, int], Edge] = {}

    @staticmethod
    def key(u: int, v: int) -> tuple[int, int]:
        if u == v:
            raise GraphError("no self edges")
        return (u, v) if u < v else (v, u)

    def add_edge(self, u: int, v: int, label: Relation, **attrs) -> Edge:
        pair = self.key(u, v)
        if not (0 <= pair[0] and pair[1] < self.m):
            raise GraphError(f"edge {pair} outside node range 0..{self.m - 1}")
        if pair in self.edges and self.edges[pair].label != Relation.UNKNOWN:
            raise GraphError(f"duplicate edge for pair {pair}")
        edge = Edge(label=label, **attrs)
        self.edges[pair] = edge
        return edge

    def get(self, u: int, v: int) -> Optional[Edge]:
        return self.edges.get(self.key(u, v))

    def pairs(self) -> Iterable[tuple[int, int]]:
        for u in range(self.m):
            for v in range(u + 1, self.m):
                yield (u, v)

    def fill_unknown(self) -> None:
        for pair in self.pairs():
            if pair not in self.edges:
                self.edges[pair] = Edge(label=Relation.UNKNOWN)

    def name_of(self, index: int) -> str:
        if self.names is not None:
            return self.names[index]
        return f"c{index + 1}"


def build_graph(
    verdicts: Sequence[PairVerdict],
    independence: Sequence[IndependenceVerdict] = (),
    *,
    m: Optional[int] = None,
    names: Optional[Sequence[str]] = None,
) -> RelationshipGraph:
    """Merge pairwise and independence verdicts into one labeled graph.

    Effective independence takes precedence over the sampled pairwise
    label (disjoint supports make dominance counts an artifact of the
    sampling geometry); the pairwise label is kept as an annotation.
    Pairs with no verdict get UNKNOWN edges.
    """
    if m is None:
        if names is not None:
            m = len(names)
        else:
            covered = [max(v.i, v.j) for v in verdicts] + [max(v.i, v.j) for v in independence]
            if not covered:
                raise GraphError("cannot size the graph: no verdicts and no explicit m")
            m = max(covered) + 1
    graph = RelationshipGraph(m, names)
    independent_pairs = {
        RelationshipGraph.key(v.i, v.j): v for v in independence if v.effective_independent
    }
    seen = set()
    for verdict in verdicts:
        pair = RelationshipGraph.key(verdict.i, verdict.j)
        if pair in seen:
            raise GraphError(f"duplicate verdict for pair {pair}")
        seen.add(pair)
        if pair in independent_pairs:
            graph.add_edge(
                *pair,
                Relation.INDEPENDENT,
                pairwise_label=verdict.label,
                harmony_magnitude=verdict.harmony_magnitude,
                conflict_magnitude=verdict.conflict_magnitude,
            )
        else:
            graph.add_edge(
                *pair,
                verdict.label,
                harmony_magnitude=verdict.harmony_magnitude,
                conflict_magnitude=verdict.conflict_magnitude,
            )
    for pair, verdict in independent_pairs.items():
        if pair not in seen:
            graph.add_edge(*pair, Relation.INDEPENDENT)
    graph.fill_unknown()
    return graph


# ---------------------------------------------------------------------------
# Transitive inference (parity union-find over the signed total-edge graph)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InferredEdge:
    pair: tuple[int, int]
    label: Relation
    witness: tuple[int, ...]  # node path of measured total edges


@dataclass(frozen=True)
class Contradiction:
    pair: tuple[int, int]
    measured: Relation
    implied: Relation
    witness: tuple[int, ...]


@dataclass(frozen=True)
class InferenceResult:
    inferred: tuple[InferredEdge, ...]
    contradictions: tuple[Contradiction, ...]


class _ParityUnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))
        self.rank = [0] * size
        self.parity = [0] * size  # parity of the edge to the parent

    def find(self, x: int) -> tuple[int, int]:
        path = []
        while self.parent[x] != x:
            path.append(x)
            x = self.parent[x]
        root = x
        # second pass: compress and accumulate parities root-ward
        total = 0
        for node in reversed(path):
            total ^= self.parity[node]
            self.parent[node] = root
            self.parity[node] = total
        if path:
            return root, self.parity[path[0]]
        return root, 0

    def union(self, u: int, v: int, sign: int) -> None:
        ru, pu = self.find(u)
        rv, pv = self.find(v)
        if ru == rv:
            raise AssertionError("union of already-joined nodes")
        if self.rank[ru] < self.rank[rv]:
            ru, rv = rv, ru
            pu, pv = pv, pu
        self.parent[rv] = ru
        self.parity[rv] = pu ^ pv ^ sign
        if self.rank[ru] == self.rank[rv]:
            self.rank[ru] += 1


def _forest_path(adjacency: dict[int, list[tuple[int, int]]], start: int, goal: int):
    # unique path in a forest; BFS with parent tracking
    if start == goal:
        return (start,)
    previous = {start: None}
    queue = [start]
    while queue:
        node = queue.pop(0)
        for neighbor, _ in adjacency.get(node, ()):
            if neighbor in previous:
                continue
            previous[neighbor] = node
            if neighbor == goal:
                path = [goal]
                while previous[path[-1]] is not None:
                    path.append(previous[path[-1]])
                return tuple(reversed(path))
            queue.append(neighbor)
    raise AssertionError("no forest path between connected nodes")


def _sign_of(label: Relation) -> int:
    return 0 if label is Relation.TOTAL_HARMONY else 1


def _label_of(sign: int) -> Relation:
    return Relation.TOTAL_HARMONY if sign == 0 else Relation.TOTAL_CONFLICT


def infer_transitive(graph: RelationshipGraph) -> InferenceResult:
    """Propagate total relationships along paths and detect odd cycles.

    Only measured TOTAL_HARMONY / TOTAL_CONFLICT edges participate;
    mixed, degenerate, independent and unknown edges neither propagate
    nor get checked. Edges are walked in graph insertion order, so the
    contradiction (if any) lands on the edge that closed the odd cycle.
    """
    uf = _ParityUnionFind(graph.m)
    forest: dict[int, list[tuple[int, int]]] = {}
    contradictions: list[Contradiction] = []
    for (u, v), edge in graph.edges.items():
        if edge.provenance != MEASURED or edge.label not in _TOTAL_LABELS:
            continue
        sign = _sign_of(edge.label)
        ru, pu = uf.find(u)
        rv, pv = uf.find(v)
        if ru == rv:
            implied = pu ^ pv
            if implied != sign:
                contradictions.append(
                    Contradiction(
                        pair=(u, v),
                        measured=edge.label,
                        implied=_label_of(implied),
                        witness=_forest_path(forest, u, v),
                    )
                )
            continue
        uf.union(u, v, sign)
        forest.setdefault(u, []).append((v, sign))
        forest.setdefault(v, []).append((u, sign))

    inferred: list[InferredEdge] = []
    for u, v in graph.pairs():
        edge = graph.edges.get((u, v))
        if edge is not None and edge.label is not Relation.UNKNOWN:
            continue
        ru, pu = uf.find(u)
        rv, pv = uf.find(v)
        if ru != rv:
            continue
        inferred.append(
            InferredEdge(
                pair=(u, v),
                label=_label_of(pu ^ pv),
                witness=_forest_path(forest, u, v),
            )
        )
    return InferenceResult(inferred=tuple(inferred), contradictions=tuple(contradictions))


def apply_inference(graph: RelationshipGraph, result: InferenceResult) -> RelationshipGraph:
    """Write inferred edges into the graph (never over measured ones)."""
    for edge in result.inferred:
        existing = graph.edges.get(edge.pair)
        if existing is not None and existing.label is not Relation.UNKNOWN:
            continue
        graph.edges[edge.pair] = Edge(
            label=edge.label, provenance=INFERRED, witness=edge.witness
        )
    return graph


# ---------------------------------------------------------------------------
# Redundancy
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RedundancyFlag:
    redundant: int
    witness: int


def detect_redundancy(
    problem: Problem,
    graph: RelationshipGraph,
    samples: SampleSet,
    eps_feas: float = DEFAULT_EPS_FEAS,
) -> list[RedundancyFlag]:
    """Inequality constraints whose sampled feasible region encloses a
    harmonious partner's region.

    On every TOTAL_HARMONY edge between inequalities: if each sampled
    point feasible for the witness is also feasible for the candidate
    (and the witness is feasible somewhere), satisfying the witness
    already implies the candidate, so the candidate is flagged. Both
    directions are tested; identical constraints flag each other.
    """
    flags: list[RedundancyFlag] = []
    for (u, v), edge in graph.edges.items():
        if edge.label is not Relation.TOTAL_HARMONY:
            continue
        cu = problem.constraints[u]
        cv = problem.constraints[v]
        if cu.kind != INEQUALITY or cv.kind != INEQUALITY:
            continue
        feasible_u = samples.values[:, u] <= eps_feas
        feasible_v = samples.values[:, v] <= eps_feas
        if feasible_v.any() and bool(np.all(feasible_u[feasible_v])):
            flags.append(RedundancyFlag(redundant=u, witness=v))
        if feasible_u.any() and bool(np.all(feasible_v[feasible_u])):
            flags.append(RedundancyFlag(redundant=v, witness=u))
    return flags


# ---------------------------------------------------------------------------
# Decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubProblem:
    constraint_indices: tuple[int, ...]
    variables: tuple[str, ...]


@dataclass(frozen=True)
class Decomposition:
    subproblems: tuple[SubProblem, ...]
    unconstrained_variables: tuple[str, ...]

    @property
    def constraint_partition(self) -> tuple[tuple[int, ...], ...]:
        return tuple(sub.constraint_indices for sub in self.subproblems)


def decompose(
    problem: Problem, effective_supports: Sequence[Iterable[str]]
) -> Decomposition:
    """Split the problem along the constraint-variable incidence.

    Connected components of the bipartite incidence built from the
    effective supports become sub-problems that can be treated
    separately; variables touched by no constraint end up in the
    unconstrained residual group. The sub-problems partition the
    constraint set.
    """
    m = len(problem.constraints)
    if len(effective_supports) != m:
        raise ValueError("need one effective support per constraint")
    names = problem.variable_names
    var_slot = {name: m + k for k, name in enumerate(names)}

    parent = list(range(m + len(names)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    used_variables: set[str] = set()
    for j, support in enumerate(effective_supports):
        for name in support:
            if name not in var_slot:
                raise ValueError(f"support references unknown variable {name!r}")
            union(j, var_slot[name])
            used_variables.add(name)

    groups: dict[int, list[int]] = {}
    for j in range(m):
        groups.setdefault(find(j), []).append(j)

    subproblems = []
    for root in sorted(groups, key=lambda r: min(groups[r])):
        constraint_indices = tuple(sorted(groups[root]))
        variables = tuple(
            name
            for name in names
            if name in used_variables and find(var_slot[name]) == root
        )
        subproblems.append(
            SubProblem(constraint_indices=constraint_indices, variables=variables)
        )
    unconstrained = tuple(name for name in names if name not in used_variables)
    return Decomposition(subproblems=tuple(subproblems), unconstrained_variables=unconstrained)
