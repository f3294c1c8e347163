"""Violation evaluators, incremental trackers, and aggregation reports."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ContractError


class ViolationTracker:
    """Tracks one constraint's violation under single-token edits.

    Trackers own a private copy of the candidate; callers must mirror every
    ``commit`` on their own copy to stay in sync.
    """

    def value(self) -> float:
        """Violation of the tracked candidate."""
        raise NotImplementedError

    def peek(self, pos: int, token: int) -> float:
        """Violation if ``candidate[pos]`` were replaced by ``token``."""
        raise NotImplementedError

    def commit(self, pos: int, token: int) -> None:
        """Apply the edit to the tracked candidate."""
        raise NotImplementedError

    def peek_block(self, positions, num_tokens: int) -> np.ndarray:
        """Violations for every (position, token) pair; rows follow ``positions``."""
        out = np.empty((len(positions), num_tokens))
        for i, pos in enumerate(positions):
            for token in range(num_tokens):
                out[i, token] = self.peek(pos, token)
        return out


class FullRecomputeTracker(ViolationTracker):
    """Fallback tracker for evaluators without an incremental variant."""

    def __init__(self, constraint: "Constraint", values: np.ndarray):
        self.constraint = constraint
        self.values = np.array(values, dtype=np.int64)
        self._value = float(constraint.violation(self.values))

    def value(self):
        return self._value

    def peek(self, pos, token):
        old = self.values[pos]
        if token == old:
            return self._value
        self.values[pos] = token
        try:
            return float(self.constraint.violation(self.values))
        finally:
            self.values[pos] = old

    def commit(self, pos, token):
        self.values[pos] = token
        self._value = float(self.constraint.violation(self.values))


class Constraint:
    """A black-box, non-negative violation over fully specified candidates."""

    name = "constraint"

    def violation(self, values: np.ndarray) -> float:
        raise NotImplementedError

    def tracker(self, values: np.ndarray) -> ViolationTracker:
        """Incremental edit tracker; defaults to full recomputation."""
        return FullRecomputeTracker(self, values)


@dataclass(frozen=True)
class ViolationReport:
    """Per-constraint violations with their aggregation weights.

    ``tiers`` optionally carries a priority key for lexicographic
    comparison, built by :func:`tier_key`.
    """

    values: tuple[float, ...]
    weights: tuple[float, ...]
    tiers: tuple[float, ...] | None = None

    def __post_init__(self):
        if len(self.values) != len(self.weights):
            raise ContractError("violation vector and weights differ in arity")

    @property
    def total(self) -> float:
        return float(sum(w * v for w, v in zip(self.weights, self.values)))

    @property
    def feasible(self) -> bool:
        return all(v == 0 for v in self.values)


def tier_key(report: ViolationReport, tier_order: tuple[int, ...]) -> tuple[float, ...]:
    """Violation values rearranged into priority order."""
    if any(not 0 <= i < len(report.values) for i in tier_order):
        raise ContractError("tier order references an unknown constraint index")
    return tuple(report.values[i] for i in tier_order)


def lexicographic_compare(a: ViolationReport, b: ViolationReport,
                          tier_order: tuple[int, ...]) -> int:
    """Compare two reports tier by tier; earlier tiers dominate.

    Returns -1 when ``a`` is preferred (lower violation in the first
    differing tier), 1 when ``b`` is, and 0 on equality.
    """
    if len(a.values) != len(b.values):
        raise ContractError("reports differ in constraint arity")
    ka, kb = tier_key(a, tier_order), tier_key(b, tier_order)
    if ka < kb:
        return -1
    if ka > kb:
        return 1
    return 0
