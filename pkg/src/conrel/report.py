"""Analysis pipeline and report emission.

The report is a self-contained JSON document: it embeds the problem,
every run parameter, the per-pair evidence, the relationship graph with
inferred edges and contradictions, redundancy flags and the
decomposition. Re-running with the recorded parameters reproduces the
same labels, and serialization is canonical (fixed key order, floats
with 17 significant digits), so identical runs give byte-identical
files.
"""

from __future__ import annotations

import csv
import json
from typing import Optional

from . import __version__
from . import expr
from . import graph as graph_mod
from . import independence as independence_mod
from . import pairwise as pairwise_mod
from . import problem as problem_mod
from .gradient import DEFAULT_STEP, SYMBOLIC, aggregate_decompositions, gradient_matrix
from .kernels import crossing_count as _kernel_crossings
from .problem import Problem, SampleSet
from .relations import ABBREVIATIONS, Relation

__all__ = [
    "SCHEMA_VERSION",
    "run_analysis",
    "canonical_json",
    "write_report",
    "load_report",
    "graph_from_report",
    "problem_from_report",
    "samples_from_report",
    "emit_matrix_csv",
]

SCHEMA_VERSION = 1

_NOTES = (
    "TOTAL_* labels summarize evidence over the recorded sample (size and seed "
    "under 'run'); they are claims about the sample, not proofs.",
    "A pair with conflict evidence and no harmony evidence is reported as "
    "TOTAL_CONFLICT; ties are excluded from the magnitude denominators.",
    "Inferred labels compose total relationships along paths of any length, "
    "which extends the two-edge composition rules.",
)


def run_analysis(
    problem: Problem,
    *,
    samples: int = problem_mod.DEFAULT_SAMPLES,
    seed: int,
    strategy: str = problem_mod.DEFAULT_STRATEGY,
    eps_tie: float = pairwise_mod.DEFAULT_EPS_TIE,
    eps_feas: float = problem_mod.DEFAULT_EPS_FEAS,
    gradient_mode: str = SYMBOLIC,
    gradient_step: float = DEFAULT_STEP,
    probe_delta: Optional[float] = None,
    eps_value: float = independence_mod.DEFAULT_EPS_VALUE,
    include_gradients: bool = True,
) -> dict:
    """Run the full pipeline and return the report document."""
    m = len(problem.constraints)
    sample_set = problem_mod.sample(problem, samples, seed, strategy)
    verdicts = pairwise_mod.analyze_all_pairs(problem, sample_set, eps_tie)
    # per-constraint supports and gradients are shared across their pairs
    supports = [
        independence_mod.effective_support(problem, j, sample_set, probe_delta, eps_value)
        for j in range(m)
    ]
    syntactic = [expr.syntactic_support(c.expr) for c in problem.constraints]
    independence_verdicts = [
        independence_mod.IndependenceVerdict(
            i=v.i,
            j=v.j,
            syntactic_independent=syntactic[v.i].isdisjoint(syntactic[v.j]),
            effective_independent=supports[v.i].isdisjoint(supports[v.j]),
            effective_supports=(supports[v.i], supports[v.j]),
        )
        for v in verdicts
    ]
    gradients = None
    if include_gradients:
        gradients = [
            gradient_matrix(problem, j, sample_set, mode=gradient_mode, step=gradient_step)
            for j in range(m)
        ]
    relationship_graph = graph_mod.build_graph(
        verdicts,
        independence_verdicts,
        m=m,
        names=problem.constraint_names,
    )
    inference = graph_mod.infer_transitive(relationship_graph)
    graph_mod.apply_inference(relationship_graph, inference)
    redundancy = graph_mod.detect_redundancy(problem, relationship_graph, sample_set, eps_feas)
    decomposition = graph_mod.decompose(problem, supports)

    names = problem.constraint_names
    indep_by_pair = {(v.i, v.j): v for v in independence_verdicts}

    pairs_section = []
    for verdict in verdicts:
        i, j = verdict.i, verdict.j
        indep = indep_by_pair[(i, j)]
        entry = {
            "i": names[i],
            "j": names[j],
            "evidence": {
                "harmony_pairs": verdict.evidence.harmony_pairs,
                "conflict_pairs": verdict.evidence.conflict_pairs,
                "tie_pairs": verdict.evidence.tie_pairs,
                "total_pairs": verdict.evidence.total_pairs,
            },
            "label": verdict.label.value,
            "harmony_magnitude": verdict.harmony_magnitude,
            "conflict_magnitude": verdict.conflict_magnitude,
            "crossings": int(
                _kernel_crossings(sample_set.values[:, i], sample_set.values[:, j], eps_tie)
            ),
            "independence": {
                "syntactic_independent": indep.syntactic_independent,
                "effective_independent": indep.effective_independent,
                "effective_support_i": sorted(indep.effective_supports[0]),
                "effective_support_j": sorted(indep.effective_supports[1]),
            },
        }
        if include_gradients:
            aggregate = aggregate_decompositions(gradients[i], gradients[j])
            entry["gradient"] = {
                "mean_harmony": aggregate.mean_harmony,
                "mean_conflict": aggregate.mean_conflict,
                "degenerate_points": aggregate.degenerate_points,
                "used_points": aggregate.used_points,
            }
        else:
            entry["gradient"] = None
        pairs_section.append(entry)

    report = {
        "schema_version": SCHEMA_VERSION,
        "tool": "conrel",
        "tool_version": __version__,
        "problem": problem_mod.problem_to_document(problem),
        "run": {
            "samples": int(samples),
            "seed": int(seed),
            "strategy": sample_set.strategy,
            "eps_tie": float(eps_tie),
            "eps_feas": float(eps_feas),
            "gradient_mode": gradient_mode if include_gradients else None,
            "gradient_step": float(gradient_step),
            "probe_delta": None if probe_delta is None else float(probe_delta),
            "eps_value": float(eps_value),
        },
        "pairs": pairs_section,
        "graph": graph_section(relationship_graph, inference),
        "redundancy": [
            {"redundant": names[flag.redundant], "witness": names[flag.witness]}
            for flag in redundancy
        ],
        "decomposition": {
            "subproblems": [
                {
                    "constraints": [names[k] for k in sub.constraint_indices],
                    "variables": list(sub.variables),
                }
                for sub in decomposition.subproblems
            ],
            "unconstrained_variables": list(decomposition.unconstrained_variables),
        },
        "notes": list(_NOTES),
    }
    return report


def graph_section(relationship_graph: graph_mod.RelationshipGraph, inference) -> dict:
    name = relationship_graph.name_of
    edges = []
    for (u, v), edge in relationship_graph.edges.items():
        entry = {
            "i": name(u),
            "j": name(v),
            "label": edge.label.value,
            "provenance": edge.provenance,
            "pairwise_label": edge.pairwise_label.value if edge.pairwise_label else None,
            "harmony_magnitude": edge.harmony_magnitude,
            "conflict_magnitude": edge.conflict_magnitude,
        }
        if edge.witness is not None:
            entry["witness"] = [name(k) for k in edge.witness]
        edges.append(entry)
    return {
        "edges": edges,
        "inferred": [
            {
                "i": name(e.pair[0]),
                "j": name(e.pair[1]),
                "label": e.label.value,
                "witness": [name(k) for k in e.witness],
            }
            for e in inference.inferred
        ],
        "contradictions": [
            {
                "i": name(c.pair[0]),
                "j": name(c.pair[1]),
                "measured": c.measured.value,
                "implied": c.implied.value,
                "witness": [name(k) for k in c.witness],
            }
            for c in inference.contradictions
        ],
    }


# ---------------------------------------------------------------------------
# Canonical serialization
# ---------------------------------------------------------------------------


def _emit(value, pieces: list[str], indent: int) -> None:
    pad = "  " * indent
    if value is None:
        pieces.append("null")
    elif value is True:
        pieces.append("true")
    elif value is False:
        pieces.append("false")
    elif isinstance(value, float):
        pieces.append(format(value, ".17g"))
    elif isinstance(value, int):
        pieces.append(str(value))
    elif isinstance(value, str):
        pieces.append(json.dumps(value))
    elif isinstance(value, dict):
        if not value:
            pieces.append("{}")
            return
        pieces.append("{\n")
        for index, (key, item) in enumerate(value.items()):
            pieces.append(f'{pad}  {json.dumps(str(key))}: ')
            _emit(item, pieces, indent + 1)
            pieces.append(",\n" if index < len(value) - 1 else "\n")
        pieces.append(pad + "}")
    elif isinstance(value, (list, tuple)):
        if not value:
            pieces.append("[]")
            return
        pieces.append("[\n")
        for index, item in enumerate(value):
            pieces.append(pad + "  ")
            _emit(item, pieces, indent + 1)
            pieces.append(",\n" if index < len(value) - 1 else "\n")
        pieces.append(pad + "]")
    else:
        raise TypeError(f"cannot serialize {type(value).__name__} into a report")


def canonical_json(document: dict) -> str:
    """Serialize with insertion-order keys and 17-significant-digit floats."""
    pieces: list[str] = []
    _emit(document, pieces, 0)
    pieces.append("\n")
    return "".join(pieces)


def write_report(document: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(canonical_json(document))


def load_report(path) -> dict:
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


# ---------------------------------------------------------------------------
# Report consumers
# ---------------------------------------------------------------------------


def problem_from_report(document: dict) -> Problem:
    return problem_mod.load_problem(json.dumps(document["problem"]))


def samples_from_report(document: dict, problem: Optional[Problem] = None) -> SampleSet:
    """Regenerate the sample set from the recorded run parameters."""
    if problem is None:
        problem = problem_from_report(document)
    run = document["run"]
    return problem_mod.sample(problem, run["samples"], run["seed"], run["strategy"])


def graph_from_report(document: dict) -> graph_mod.RelationshipGraph:
    """Rebuild the measured graph (pairwise labels + independence overrides)."""
    problem_doc = document["problem"]
    names = [c["name"] for c in problem_doc["constraints"]]
    index = {name: k for k, name in enumerate(names)}
    relationship_graph = graph_mod.RelationshipGraph(len(names), names)
    for entry in document["pairs"]:
        u, v = index[entry["i"]], index[entry["j"]]
        if entry["independence"]["effective_independent"]:
            label = Relation.INDEPENDENT
            annotation = Relation(entry["label"])
        else:
            label = Relation(entry["label"])
            annotation = None
        relationship_graph.add_edge(
            u,
            v,
            label,
            pairwise_label=annotation,
            harmony_magnitude=entry["harmony_magnitude"],
            conflict_magnitude=entry["conflict_magnitude"],
        )
    relationship_graph.fill_unknown()
    return relationship_graph


def emit_matrix_csv(relationship_graph: graph_mod.RelationshipGraph, path) -> None:
    """m x m label matrix; cells carry the abbreviation and, where defined,
    the conflict magnitude to 4 decimals."""
    name = relationship_graph.name_of
    names = [name(k) for k in range(relationship_graph.m)]
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow([""] + names)
        for u in range(relationship_graph.m):
            row = [names[u]]
            for v in range(relationship_graph.m):
                if u == v:
                    row.append("—")
                    continue
                edge = relationship_graph.get(u, v)
                abbrev = ABBREVIATIONS[edge.label]
                if edge.conflict_magnitude is not None:
                    row.append(f"{abbrev},{edge.conflict_magnitude:.4f}")
                else:
                    row.append(abbrev)
            writer.writerow(row)
