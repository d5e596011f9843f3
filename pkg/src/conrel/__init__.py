"""Pairwise constraint-relationship analysis for bounded optimization problems.

Given a problem with many inequality/equality constraints over box-bounded
real variables, this package classifies every constraint pair as
conflicting, harmonious, mixed or independent from sampled evidence,
quantifies the conflict/harmony magnitude three ways (Pareto-dominance
counting, parallel-coordinate crossings, gradient decomposition), prunes
redundant constraints, infers unmeasured relationships by transitivity,
and decomposes the problem into independent sub-problems.
"""

__version__ = "0.1.0"

from .expr import (  # noqa: F401
    EvaluationError,
    ExprAst,
    ParseError,
    differentiate,
    evaluate,
    parse,
    syntactic_support,
    unparse,
)
from .problem import (  # noqa: F401
    Constraint,
    Feasibility,
    NonFiniteError,
    Problem,
    ProblemError,
    SampleSet,
    SamplingError,
    VariableSpec,
    constraint_value,
    feasibility,
    load_problem,
    load_problem_file,
    sample,
)
from .pairwise import (  # noqa: F401
    PairEvidence,
    PairOutcome,
    PairVerdict,
    analyze_all_pairs,
    analyze_pair,
    compare_pair,
    crossing_count,
)
from .gradient import (  # noqa: F401
    GradientAggregate,
    GradientDecomposition,
    StencilError,
    aggregate_decompositions,
    angle_decomposition,
    gradient,
    gradient_matrix,
    gradient_relationship,
)
from .independence import (  # noqa: F401
    IndependenceVerdict,
    effective_support,
    independence_verdict,
)
from .graph import (  # noqa: F401
    Contradiction,
    Decomposition,
    GraphError,
    InferenceResult,
    InferredEdge,
    RedundancyFlag,
    RelationshipGraph,
    SubProblem,
    apply_inference,
    build_graph,
    decompose,
    detect_redundancy,
    infer_transitive,
)
from .generator import (  # noqa: F401
    GeneratorError,
    PlantedProblem,
    UnrealizablePlanError,
    example_suite,
    generate_affine,
)
from .relations import Relation  # noqa: F401
from .report import canonical_json, emit_matrix_csv, run_analysis  # noqa: F401
