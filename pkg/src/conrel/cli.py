"""Command-line interface.

Exit codes: 0 success, 1 input or validation error, 2 numerical failure
(a non-finite constraint value at a concrete point).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import __version__
from . import generator as generator_mod
from . import graph as graph_mod
from . import independence as independence_mod
from . import pairwise as pairwise_mod
from . import plots
from . import problem as problem_mod
from . import report as report_mod
from .expr import EvaluationError, ParseError
from .kernels import crossing_count
from .generator import GeneratorError
from .gradient import DEFAULT_STEP as DEFAULT_GRADIENT_STEP, StencilError, gradient_relationship
from .graph import GraphError
from .problem import NonFiniteError, ProblemError, SamplingError
from .relations import Relation

_INPUT_ERRORS = (
    ProblemError,
    SamplingError,
    ParseError,
    GraphError,
    GeneratorError,
    StencilError,
    ValueError,
    OSError,
    KeyError,
)
_NUMERICAL_ERRORS = (NonFiniteError, EvaluationError)


def _sampling_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--samples", type=int, default=problem_mod.DEFAULT_SAMPLES,
                        help="number of sample points (default 200)")
    parser.add_argument("--seed", type=int, required=True,
                        help="RNG seed; required so every report is reproducible")
    parser.add_argument("--strategy", choices=["uniform", "lhs", "grid"], default="lhs")
    parser.add_argument("--eps-tie", type=float, default=1e-12, dest="eps_tie")
    parser.add_argument("--eps-feas", type=float, default=1e-6, dest="eps_feas")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conrel",
        description="Classify pairwise constraint relationships of a bounded "
        "optimization problem: conflict, harmony, independence, and their magnitudes.",
    )
    parser.add_argument("--version", action="version", version=f"conrel {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    analyze = commands.add_parser("analyze", help="full pipeline; writes a JSON report")
    analyze.add_argument("problem", help="problem JSON file")
    _sampling_arguments(analyze)
    analyze.add_argument("--gradients", choices=["symbolic", "fd"], default="symbolic")
    analyze.add_argument("--step", type=float, default=DEFAULT_GRADIENT_STEP,
                         help="central-difference step for --gradients fd")
    analyze.add_argument("--out", required=True, help="report output path")
    analyze.add_argument("--csv", help="also write the m x m label matrix as CSV")

    pair = commands.add_parser("pair", help="verbose evidence for one constraint pair")
    pair.add_argument("problem")
    pair.add_argument("-i", required=True, help="first constraint name")
    pair.add_argument("-j", required=True, help="second constraint name")
    _sampling_arguments(pair)
    pair.add_argument("--svg-parallel", dest="svg_parallel",
                      help="write the parallel-coordinate view here")
    pair.add_argument("--svg-scatter", dest="svg_scatter",
                      help="write the scatter view here")

    gradients = commands.add_parser("gradients", help="gradient aggregates for every pair")
    gradients.add_argument("problem")
    _sampling_arguments(gradients)
    gradients.add_argument("--mode", choices=["symbolic", "fd"], default="symbolic")
    gradients.add_argument("--step", type=float, default=DEFAULT_GRADIENT_STEP)

    decomp = commands.add_parser("decompose", help="split into independent sub-problems")
    decomp.add_argument("problem")
    _sampling_arguments(decomp)

    infer = commands.add_parser("infer", help="transitivity pass over an existing report")
    infer.add_argument("--report", required=True)
    infer.add_argument("--out", help="write the report with refreshed graph/inference here")

    generate = commands.add_parser("generate", help="emit generated problems")
    generate.add_argument("--family", choices=["affine", "paper"], required=True)
    generate.add_argument("--n", type=int, default=2, help="variable count (affine family)")
    generate.add_argument("--m", type=int, default=2, help="constraint count (affine family)")
    generate.add_argument(
        "--plan",
        default="random",
        help="affine: 'random', a single label (TH|TC|INDEPENDENT) for every pair, "
        "or a JSON file of pair labels; paper: which example "
        "(conflict|harmony|independence|merged, default merged)",
    )
    generate.add_argument("--seed", type=int, default=0)
    generate.add_argument("--out", required=True, help="problem JSON output path")
    generate.add_argument("--labels", help="write the known pair labels here")

    plot = commands.add_parser("plot", help="SVG from a report")
    plot.add_argument("--report", required=True)
    plot.add_argument("--pair", required=True, help="two constraint names, comma separated")
    plot.add_argument("--kind", choices=["parallel", "scatter"], required=True)
    plot.add_argument("--out", required=True)

    return parser


def _print_json(document: dict) -> None:
    sys.stdout.write(report_mod.canonical_json(document))


def _cmd_analyze(args) -> int:
    problem = problem_mod.load_problem_file(args.problem)
    document = report_mod.run_analysis(
        problem,
        samples=args.samples,
        seed=args.seed,
        strategy=args.strategy,
        eps_tie=args.eps_tie,
        eps_feas=args.eps_feas,
        gradient_mode=args.gradients,
        gradient_step=args.step,
    )
    report_mod.write_report(document, args.out)
    if args.csv:
        relationship_graph = report_mod.graph_from_report(document)
        inference = graph_mod.infer_transitive(relationship_graph)
        graph_mod.apply_inference(relationship_graph, inference)
        report_mod.emit_matrix_csv(relationship_graph, args.csv)
    return 0


def _cmd_pair(args) -> int:
    problem = problem_mod.load_problem_file(args.problem)
    i = problem.constraint_index(args.i)
    j = problem.constraint_index(args.j)
    if i == j:
        raise ProblemError("pick two different constraints")
    samples = problem_mod.sample(problem, args.samples, args.seed, args.strategy)
    verdict = pairwise_mod.analyze_pair(problem, i, j, samples, args.eps_tie)
    indep = independence_mod.independence_verdict(problem, i, j, samples)
    aggregate = gradient_relationship(problem, i, j, samples)
    document = {
        "problem": problem.name,
        "i": args.i,
        "j": args.j,
        "run": {
            "samples": args.samples,
            "seed": args.seed,
            "strategy": args.strategy,
            "eps_tie": args.eps_tie,
        },
        "evidence": {
            "harmony_pairs": verdict.evidence.harmony_pairs,
            "conflict_pairs": verdict.evidence.conflict_pairs,
            "tie_pairs": verdict.evidence.tie_pairs,
            "total_pairs": verdict.evidence.total_pairs,
        },
        "label": verdict.label.value,
        "harmony_magnitude": verdict.harmony_magnitude,
        "conflict_magnitude": verdict.conflict_magnitude,
        "crossings": int(crossing_count(samples.values[:, i], samples.values[:, j], args.eps_tie)),
        "independence": {
            "syntactic_independent": indep.syntactic_independent,
            "effective_independent": indep.effective_independent,
        },
        "gradient": {
            "mean_harmony": aggregate.mean_harmony,
            "mean_conflict": aggregate.mean_conflict,
            "degenerate_points": aggregate.degenerate_points,
        },
    }
    _print_json(document)
    if args.svg_parallel:
        plots.emit_parallel_coordinates_svg(
            samples.values[:, i], samples.values[:, j], (args.i, args.j), args.svg_parallel
        )
    if args.svg_scatter:
        plots.emit_scatter_svg(
            samples.values[:, i], samples.values[:, j], (args.i, args.j), args.svg_scatter
        )
    return 0


def _cmd_gradients(args) -> int:
    problem = problem_mod.load_problem_file(args.problem)
    samples = problem_mod.sample(problem, args.samples, args.seed, args.strategy)
    names = problem.constraint_names
    entries = []
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            aggregate = gradient_relationship(
                problem, i, j, samples, mode=args.mode, step=args.step
            )
            entries.append(
                {
                    "i": names[i],
                    "j": names[j],
                    "mean_harmony": aggregate.mean_harmony,
                    "mean_conflict": aggregate.mean_conflict,
                    "degenerate_points": aggregate.degenerate_points,
                    "used_points": aggregate.used_points,
                }
            )
    _print_json(
        {
            "problem": problem.name,
            "run": {
                "samples": args.samples,
                "seed": args.seed,
                "strategy": args.strategy,
                "mode": args.mode,
                "step": args.step,
            },
            "pairs": entries,
        }
    )
    return 0


def _cmd_decompose(args) -> int:
    problem = problem_mod.load_problem_file(args.problem)
    samples = problem_mod.sample(problem, args.samples, args.seed, args.strategy)
    supports = [
        independence_mod.effective_support(problem, j, samples)
        for j in range(len(problem.constraints))
    ]
    decomposition = graph_mod.decompose(problem, supports)
    names = problem.constraint_names
    _print_json(
        {
            "problem": problem.name,
            "run": {"samples": args.samples, "seed": args.seed, "strategy": args.strategy},
            "subproblems": [
                {
                    "constraints": [names[k] for k in sub.constraint_indices],
                    "variables": list(sub.variables),
                }
                for sub in decomposition.subproblems
            ],
            "unconstrained_variables": list(decomposition.unconstrained_variables),
        }
    )
    return 0


def _cmd_infer(args) -> int:
    document = report_mod.load_report(args.report)
    relationship_graph = report_mod.graph_from_report(document)
    inference = graph_mod.infer_transitive(relationship_graph)
    name = relationship_graph.name_of
    result = {
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
    _print_json(result)
    if args.out:
        graph_mod.apply_inference(relationship_graph, inference)
        document["graph"] = report_mod.graph_section(relationship_graph, inference)
        report_mod.write_report(document, args.out)
    return 0


def _plan_index(token) -> int:
    text = str(token)
    if text.startswith("c") and text[1:].isdigit():
        return int(text[1:]) - 1
    if text.lstrip("-").isdigit():
        return int(text) - 1
    raise GeneratorError(f"cannot read constraint reference {token!r} in the plan file")


def _load_plan(raw: str):
    token = raw.strip()
    if token.lower() == "random" or token.upper() in (
        "TH",
        "TC",
        "IND",
        "INDEPENDENT",
        "TOTAL_HARMONY",
        "TOTAL_CONFLICT",
    ):
        return token
    # anything else is a plan file in the labels-sidecar format, with pairs
    # referenced as 1-based indices or c<k> names
    with open(token, "r", encoding="utf-8") as handle:
        sidecar = json.load(handle)
    plan = {}
    for entry in sidecar["pairs"]:
        plan[(_plan_index(entry["i"]), _plan_index(entry["j"]))] = Relation(entry["label"])
    return plan


_PAPER_EXAMPLES = {
    "conflict": generator_mod.conflict_example,
    "harmony": generator_mod.harmony_example,
    "independence": generator_mod.independence_example,
    "merged": generator_mod.merged_example,
}

_PAPER_LABELS = {
    "conflict": [(0, 1, Relation.TOTAL_CONFLICT)],
    "harmony": [(0, 1, Relation.TOTAL_HARMONY)],
    "independence": [(0, 1, Relation.INDEPENDENT)],
    "merged": [
        (0, 1, Relation.TOTAL_CONFLICT),
        (2, 3, Relation.TOTAL_HARMONY),
        (4, 5, Relation.INDEPENDENT),
    ],
}


def _cmd_generate(args) -> int:
    if args.family == "affine":
        planted = generator_mod.generate_affine(args.n, args.m, args.seed, _load_plan(args.plan))
        problem = planted.problem
        labels = generator_mod.labels_document(planted)
    else:
        which = args.plan if args.plan != "random" else "merged"
        if which not in _PAPER_EXAMPLES:
            raise GeneratorError(
                f"unknown example {which!r}; pick conflict, harmony, independence or merged"
            )
        problem = _PAPER_EXAMPLES[which]()
        names = problem.constraint_names
        labels = {
            "pairs": [
                {"i": names[i], "j": names[j], "label": label.value}
                for i, j, label in _PAPER_LABELS[which]
            ]
        }
    with open(args.out, "w", encoding="utf-8") as handle:
        handle.write(report_mod.canonical_json(problem_mod.problem_to_document(problem)))
    if args.labels:
        with open(args.labels, "w", encoding="utf-8") as handle:
            handle.write(report_mod.canonical_json(labels))
    return 0


def _cmd_plot(args) -> int:
    document = report_mod.load_report(args.report)
    problem = report_mod.problem_from_report(document)
    samples = report_mod.samples_from_report(document, problem)
    parts = args.pair.split(",")
    if len(parts) != 2:
        raise ProblemError("--pair needs two constraint names separated by a comma")
    i = problem.constraint_index(parts[0].strip())
    j = problem.constraint_index(parts[1].strip())
    values_i = samples.values[:, i]
    values_j = samples.values[:, j]
    names = (problem.constraint_names[i], problem.constraint_names[j])
    if args.kind == "parallel":
        plots.emit_parallel_coordinates_svg(values_i, values_j, names, args.out)
    else:
        plots.emit_scatter_svg(values_i, values_j, names, args.out)
    return 0


_COMMANDS = {
    "analyze": _cmd_analyze,
    "pair": _cmd_pair,
    "gradients": _cmd_gradients,
    "decompose": _cmd_decompose,
    "infer": _cmd_infer,
    "generate": _cmd_generate,
    "plot": _cmd_plot,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; that is an input error here,
        # exit 2 is reserved for numerical failures
        code = exc.code if isinstance(exc.code, int) else 1
        return 0 if code == 0 else 1
    try:
        return _COMMANDS[args.command](args)
    except _NUMERICAL_ERRORS as exc:
        print(f"conrel: numerical failure: {exc}", file=sys.stderr)
        return 2
    except _INPUT_ERRORS as exc:
        print(f"conrel: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
