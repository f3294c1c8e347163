"""Peptide property evaluators: length window, net charge, hydrophobic ratio.

Peptides live in a fixed number of sequence slots over the 20 standard
residues plus a terminator token; everything at and after the first
terminator is outside the logical peptide and ignored by the evaluators.
Net charge is a residue count model: positive residues contribute +1,
negative residues -1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ContractError
from ..vocab import Vocab
from .base import Constraint, ViolationReport, ViolationTracker

RESIDUES = "ACDEFGHIKLMNPQRSTVWY"
TERMINATOR = "-"
HYDROPHOBIC = frozenset("AVILMFWC")
POSITIVE = frozenset("KRH")
NEGATIVE = frozenset("DE")


def residue_vocab() -> Vocab:
    return Vocab(tuple(RESIDUES) + (TERMINATOR,))


@dataclass(frozen=True)
class PeptideSpec:
    """Feasibility thresholds for antimicrobial-style peptides."""

    min_length: int = 10
    max_length: int = 50
    charge_min: int = 2
    charge_max: int = 9
    hydro_min: float = 0.30
    hydrophobic: frozenset = HYDROPHOBIC
    positive: frozenset = POSITIVE
    negative: frozenset = NEGATIVE


def _membership_weights(vocab: Vocab, residues) -> np.ndarray:
    return np.array([1 if sym in residues else 0 for sym in vocab.symbols],
                    dtype=np.int64)


def _charge_weights(vocab: Vocab, spec: "PeptideSpec") -> np.ndarray:
    return np.array([(sym in spec.positive) - (sym in spec.negative)
                     for sym in vocab.symbols], dtype=np.int64)


def logical_length(values: np.ndarray, term_id: int) -> int:
    """Index of the first terminator, or the slot count if there is none."""
    hits = np.flatnonzero(np.asarray(values) == term_id)
    return int(hits[0]) if hits.size else len(values)


def peptide_string(values: np.ndarray, vocab: Vocab) -> str:
    """Residues before the first terminator, as single-letter codes."""
    term = vocab.index(TERMINATOR)
    return vocab.render(np.asarray(values)[:logical_length(values, term)])


class _PrefixTracker(ViolationTracker):
    """Shared machinery: cumulative counts over the logical prefix.

    Keeps the first and second terminator slots plus a per-token weight
    cumsum, so a hypothetical edit's new prefix statistics come out in O(1).
    A commit rebuilds the cached arrays in O(L).
    """

    def __init__(self, values: np.ndarray, term_id: int, weights: np.ndarray):
        self.term_id = term_id
        self.weights = weights
        self.values = np.array(values, dtype=np.int64)
        if np.any(self.values < 0) or np.any(self.values >= len(weights)):
            raise ContractError("candidate contains values outside the alphabet")
        self._rebuild()

    def _rebuild(self):
        terms = np.flatnonzero(self.values == self.term_id)
        slots = len(self.values)
        self.first = int(terms[0]) if terms.size else slots
        self.second = int(terms[1]) if terms.size > 1 else slots
        self.cum = np.concatenate(([0], np.cumsum(self.weights[self.values])))

    def _edited_prefix(self, pos: int, token: int) -> tuple[int, int]:
        """(logical length, weighted count) after a hypothetical edit."""
        old = self.values[pos]
        if token == old:
            new_first = self.first
        elif token == self.term_id:
            new_first = min(self.first, pos)
        elif pos == self.first:
            new_first = self.second
        else:
            new_first = self.first
        count = int(self.cum[new_first])
        if pos < new_first:
            count += int(self.weights[token] - self.weights[old])
        return new_first, count

    def commit(self, pos, token):
        if not 0 <= pos < len(self.values):
            raise ContractError(f"position {pos} out of range")
        if not 0 <= token < len(self.weights):
            raise ContractError(f"token {token} outside the alphabet")
        self.values[pos] = token
        self._rebuild()

    def _block_prefixes(self, positions):
        """Vectorized :meth:`_edited_prefix` over positions x tokens."""
        positions = np.asarray(positions)
        num_tokens = len(self.weights)
        old = self.values[positions]
        tokens = np.arange(num_tokens)
        new_first = np.full((len(positions), num_tokens), self.first)
        new_first[:, self.term_id] = np.minimum(self.first, positions)
        at_first = positions == self.first
        new_first[at_first] = np.where(tokens == self.term_id, self.first, self.second)
        noop = old[:, None] == tokens[None, :]
        new_first[noop] = self.first
        counts = self.cum[new_first]
        inside = positions[:, None] < new_first
        counts = counts + inside * (self.weights[tokens][None, :] - self.weights[old][:, None])
        return new_first, counts


class LengthWindow(Constraint):
    """Hinge distance of the logical length to the allowed window."""

    name = "length"

    def __init__(self, spec: PeptideSpec, vocab: Vocab):
        self.spec = spec
        self.vocab = vocab
        self.term_id = vocab.index(TERMINATOR)

    def _nu(self, length: int) -> float:
        return float(max(0, self.spec.min_length - length)
                     + max(0, length - self.spec.max_length))

    def violation(self, values):
        return self._nu(logical_length(values, self.term_id))

    def tracker(self, values):
        return _LengthTracker(self, values)


class _LengthTracker(_PrefixTracker):
    def __init__(self, constraint: LengthWindow, values):
        self.constraint = constraint
        super().__init__(values, constraint.term_id,
                         np.zeros(constraint.vocab.size, dtype=np.int64))

    def value(self):
        return self.constraint._nu(self.first)

    def peek(self, pos, token):
        new_first, _ = self._edited_prefix(pos, token)
        return self.constraint._nu(new_first)

    def peek_block(self, positions, num_tokens):
        new_first, _ = self._block_prefixes(positions)
        lo, hi = self.constraint.spec.min_length, self.constraint.spec.max_length
        return (np.maximum(0, lo - new_first)
                + np.maximum(0, new_first - hi)).astype(np.float64)


class ChargeWindow(Constraint):
    """Hinge distance of the net residue charge to the allowed window."""

    name = "charge"

    def __init__(self, spec: PeptideSpec, vocab: Vocab):
        self.spec = spec
        self.vocab = vocab
        self.term_id = vocab.index(TERMINATOR)
        self.charge_of = _charge_weights(vocab, spec)

    def _nu(self, charge: int) -> float:
        return float(max(0, self.spec.charge_min - charge)
                     + max(0, charge - self.spec.charge_max))

    def violation(self, values):
        values = np.asarray(values)
        prefix = values[:logical_length(values, self.term_id)]
        return self._nu(int(self.charge_of[prefix].sum()))

    def tracker(self, values):
        return _ChargeTracker(self, values)


class _ChargeTracker(_PrefixTracker):
    def __init__(self, constraint: ChargeWindow, values):
        self.constraint = constraint
        super().__init__(values, constraint.term_id, constraint.charge_of)

    def value(self):
        return self.constraint._nu(int(self.cum[self.first]))

    def peek(self, pos, token):
        _, charge = self._edited_prefix(pos, token)
        return self.constraint._nu(charge)

    def peek_block(self, positions, num_tokens):
        _, charges = self._block_prefixes(positions)
        lo, hi = self.constraint.spec.charge_min, self.constraint.spec.charge_max
        return (np.maximum(0, lo - charges)
                + np.maximum(0, charges - hi)).astype(np.float64)


class HydrophobicFraction(Constraint):
    """Shortfall of the hydrophobic residue fraction below the minimum."""

    name = "hydrophobicity"

    def __init__(self, spec: PeptideSpec, vocab: Vocab):
        self.spec = spec
        self.vocab = vocab
        self.term_id = vocab.index(TERMINATOR)
        self.is_hydro = _membership_weights(vocab, spec.hydrophobic)

    def _nu(self, hydro: int, length: int) -> float:
        fraction = hydro / length if length else 0.0
        return float(max(0.0, self.spec.hydro_min - fraction))

    def violation(self, values):
        values = np.asarray(values)
        length = logical_length(values, self.term_id)
        return self._nu(int(self.is_hydro[values[:length]].sum()), length)

    def tracker(self, values):
        return _HydroTracker(self, values)


class _HydroTracker(_PrefixTracker):
    def __init__(self, constraint: HydrophobicFraction, values):
        self.constraint = constraint
        super().__init__(values, constraint.term_id, constraint.is_hydro)

    def value(self):
        return self.constraint._nu(int(self.cum[self.first]), self.first)

    def peek(self, pos, token):
        new_first, hydro = self._edited_prefix(pos, token)
        return self.constraint._nu(hydro, new_first)

    def peek_block(self, positions, num_tokens):
        new_first, hydro = self._block_prefixes(positions)
        with np.errstate(invalid="ignore", divide="ignore"):
            fraction = np.where(new_first > 0, hydro / np.maximum(new_first, 1), 0.0)
        return np.maximum(0.0, self.constraint.spec.hydro_min - fraction)


def peptide_constraints(spec: PeptideSpec, vocab: Vocab):
    """The three evaluators in report order: length, charge, hydrophobicity."""
    return (LengthWindow(spec, vocab), ChargeWindow(spec, vocab),
            HydrophobicFraction(spec, vocab))


def peptide_violation(seq, spec: PeptideSpec | None = None,
                      vocab: Vocab | None = None) -> ViolationReport:
    """Three-component report for a peptide given as a string or token array."""
    spec = spec or PeptideSpec()
    vocab = vocab or residue_vocab()
    if isinstance(seq, str):
        values = vocab.parse(seq + TERMINATOR)
    else:
        values = np.asarray(seq)
    nu = tuple(c.violation(values) for c in peptide_constraints(spec, vocab))
    return ViolationReport(nu, (1.0, 1.0, 1.0))


def read_peptides(path) -> list[str]:
    """Single-letter residue strings, one per line; ``#`` comments."""
    out = []
    with open(path, encoding="utf-8") as handle:
        for raw in handle:
            line = raw.strip()
            if line and not line.startswith("#"):
                out.append(line)
    return out
