"""Pairwise constraint classification from sampled evidence.

Every unordered pair of sample points is compared on both constraint
values. A pair where one point improves both constraints is harmony
evidence; a pair where improving one worsens the other is conflict
evidence; pairs with a value difference inside eps_tie on either axis
are ties and excluded from magnitudes. The crossing count of the
two-axis parallel-coordinate picture equals the conflict-pair count by
construction, which the test suite checks as a cross-method oracle.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .problem import Problem, SampleSet
from .relations import Relation

__all__ = [
    "DEFAULT_EPS_TIE",
    "PairOutcome",
    "PairEvidence",
    "PairVerdict",
    "compare_pair",
    "analyze_pair",
    "analyze_all_pairs",
    "crossing_count",
    "counts_from_values",
]

DEFAULT_EPS_TIE = 1e-12


class PairOutcome(str, enum.Enum):
    HARMONY = "HARMONY"
    CONFLICT = "CONFLICT"
    TIE = "TIE"


@dataclass(frozen=True)
class PairEvidence:
    harmony_pairs: int
    conflict_pairs: int
    tie_pairs: int

    @property
    def total_pairs(self) -> int:
        return self.harmony_pairs + self.conflict_pairs + self.tie_pairs

    @property
    def decisive_pairs(self) -> int:
        return self.harmony_pairs + self.conflict_pairs


@dataclass(frozen=True)
class PairVerdict:
    i: int
    j: int
    evidence: PairEvidence
    label: Relation
    harmony_magnitude: Optional[float]
    conflict_magnitude: Optional[float]


def compare_pair(
    fi_a: float, fi_b: float, fj_a: float, fj_b: float, eps_tie: float = DEFAULT_EPS_TIE
) -> PairOutcome:
    """Classify one point pair on constraints i and j.

    TIE when either value difference is within eps_tie, HARMONY when
    both differences share a sign, CONFLICT when they oppose. Symmetric
    under swapping the two points.
    """
    di = fi_a - fi_b
    dj = fj_a - fj_b
    if abs(di) <= eps_tie or abs(dj) <= eps_tie:
        return PairOutcome.TIE
    if (di > 0) == (dj > 0):
        return PairOutcome.HARMONY
    return PairOutcome.CONFLICT


def counts_from_values(
    values_i: Sequence[float], values_j: Sequence[float], eps_tie: float = DEFAULT_EPS_TIE
) -> PairEvidence:
    """Evidence counts over all unordered pairs of two value vectors."""
    harmony, conflict, ties = kernels.dominance_counts(values_i, values_j, eps_tie)
    return PairEvidence(harmony_pairs=harmony, conflict_pairs=conflict, tie_pairs=ties)


def _verdict_from_evidence(i: int, j: int, evidence: PairEvidence) -> PairVerdict:
    harmony = evidence.harmony_pairs
    conflict = evidence.conflict_pairs
    if harmony > 0 and conflict == 0:
        label = Relation.TOTAL_HARMONY
    elif conflict > 0 and harmony == 0:
        label = Relation.TOTAL_CONFLICT
    elif harmony > 0 and conflict > 0:
        label = Relation.MIXED
    else:
        label = Relation.DEGENERATE
    decisive = evidence.decisive_pairs
    if decisive > 0:
        harmony_magnitude: Optional[float] = harmony / decisive
        conflict_magnitude: Optional[float] = conflict / decisive
    else:
        harmony_magnitude = None
        conflict_magnitude = None
    return PairVerdict(
        i=i,
        j=j,
        evidence=evidence,
        label=label,
        harmony_magnitude=harmony_magnitude,
        conflict_magnitude=conflict_magnitude,
    )


def analyze_pair(
    problem: Problem,
    i: int,
    j: int,
    samples: SampleSet,
    eps_tie: float = DEFAULT_EPS_TIE,
) -> PairVerdict:
    """Classify constraints i and j from a sample set.

    Magnitudes are fractions of non-tied pairs; the "total" labels are
    evidence over this sample, not proofs, so callers should report the
    sample size and seed alongside them.
    """
    if i == j:
        raise ValueError("a constraint cannot be paired with itself")
    if samples.count < 2:
        raise ValueError("pairwise analysis needs at least 2 samples")
    evidence = counts_from_values(samples.values[:, i], samples.values[:, j], eps_tie)
    return _verdict_from_evidence(i, j, evidence)


def analyze_all_pairs(
    problem: Problem, samples: SampleSet, eps_tie: float = DEFAULT_EPS_TIE
) -> list[PairVerdict]:
    """Verdicts for every unordered constraint pair, in (i, j) row-major order."""
    m = len(problem.constraints)
    return [
        analyze_pair(problem, i, j, samples, eps_tie) for i in range(m) for j in range(i + 1, m)
    ]


def crossing_count(
    values_i: Sequence[float], values_j: Sequence[float], eps_tie: float = DEFAULT_EPS_TIE
) -> int:
    """Number of crossing segment pairs in the two-axis parallel-coordinate view."""
    values_i = np.asarray(values_i, dtype=float)
    values_j = np.asarray(values_j, dtype=float)
    if values_i.shape != values_j.shape:
        raise ValueError("value vectors must have equal length")
    if values_i.size < 2:
        raise ValueError("crossing count needs at least 2 points")
    return kernels.crossing_count(values_i, values_j, eps_tie)
