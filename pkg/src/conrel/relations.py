"""Shared vocabulary for pairwise constraint relationships."""

from __future__ import annotations

import enum


class Relation(str, enum.Enum):
    """Label attached to an unordered pair of constraints."""

    TOTAL_HARMONY = "TOTAL_HARMONY"
    TOTAL_CONFLICT = "TOTAL_CONFLICT"
    MIXED = "MIXED"
    DEGENERATE = "DEGENERATE"
    INDEPENDENT = "INDEPENDENT"
    UNKNOWN = "UNKNOWN"

    def __str__(self) -> str:  # pragma: no cover - trivial
        return self.value


ABBREVIATIONS = {
    Relation.TOTAL_HARMONY: "TH",
    Relation.TOTAL_CONFLICT: "TC",
    Relation.MIXED: "MX",
    Relation.DEGENERATE: "DG",
    Relation.INDEPENDENT: "IND",
    Relation.UNKNOWN: "UNK",
}
