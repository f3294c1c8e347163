"""CNF clause evaluation with incremental flip deltas, plus DIMACS io.

Assignments are token arrays over the binary alphabet: token 1 means true.
Variable ``v`` (1-based, as in DIMACS) corresponds to position ``v - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..errors import ConfigError, ContractError, ParseError, StaleTrackerError
from ..vocab import Vocab
from .base import Constraint, ViolationTracker

ENUM_VAR_CAP = 20


def assignment_vocab() -> Vocab:
    return Vocab(("0", "1"))


@dataclass(frozen=True)
class CnfFormula:
    """CNF over ``num_vars`` variables; literals are signed 1-based indices."""

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.num_vars < 1:
            raise ConfigError("formula needs at least one variable")
        if not self.clauses:
            raise ConfigError("formula needs at least one clause")
        for clause in self.clauses:
            if not clause:
                raise ConfigError("clauses must be non-empty")
            if any(lit == 0 or abs(lit) > self.num_vars for lit in clause):
                raise ConfigError(f"literal out of range in clause {clause}")

    @cached_property
    def _flat(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(variable positions, polarity, clause index) for every literal."""
        var_pos, polarity, clause_ids = [], [], []
        for ci, clause in enumerate(self.clauses):
            for lit in clause:
                var_pos.append(abs(lit) - 1)
                polarity.append(1 if lit > 0 else 0)
                clause_ids.append(ci)
        return (np.array(var_pos), np.array(polarity), np.array(clause_ids))


class ClauseViolations(Constraint):
    """Number of clauses with every literal false."""

    name = "clauses"

    def __init__(self, formula: CnfFormula,
                 undecided_penalty: float = 1.0,
                 unassigned_penalty: float = 10.0):
        self.formula = formula
        self.undecided_penalty = undecided_penalty
        self.unassigned_penalty = unassigned_penalty
        self._var_pos, self._polarity, self._clause_ids = formula._flat
        # per-variable literal occurrences, for O(occurrences) flip deltas
        self._occ: list[tuple[np.ndarray, np.ndarray]] = []
        for var in range(formula.num_vars):
            sel = self._var_pos == var
            self._occ.append((self._clause_ids[sel], self._polarity[sel]))

    def violation(self, values):
        values = np.asarray(values)
        if values.shape != (self.formula.num_vars,):
            raise ContractError(
                f"assignment length {values.shape} != {self.formula.num_vars} variables")
        if np.any(values > 1):
            return self._violation_with_masks(values)
        true_lits = values[self._var_pos] == self._polarity
        m = len(self.formula.clauses)
        satisfied = np.bincount(self._clause_ids[true_lits], minlength=m) > 0
        return int(m - satisfied.sum())

    def _violation_with_masks(self, values):
        """Penalty variant for partially specified assignments.

        Inert in the sampling pipeline (search candidates are always fully
        specified) but kept so the evaluator degrades gracefully: undecided
        clauses and unassigned variables are penalized instead of crashing.
        """
        total = 0.0
        assigned = values <= 1
        for clause in self.formula.clauses:
            decided_true = False
            undecided = False
            for lit in clause:
                pos = abs(lit) - 1
                if not assigned[pos]:
                    undecided = True
                elif values[pos] == (1 if lit > 0 else 0):
                    decided_true = True
                    break
            if decided_true:
                continue
            total += self.undecided_penalty if undecided else 1.0
        total += self.unassigned_penalty * int((~assigned).sum())
        return total

    def true_literal_counts(self, values) -> np.ndarray:
        values = np.asarray(values)
        true_lits = values[self._var_pos] == self._polarity
        return np.bincount(self._clause_ids[true_lits],
                           minlength=len(self.formula.clauses))

    def tracker(self, values):
        return ClauseTracker(self, values)


class ClauseTracker(ViolationTracker):
    """Maintains per-clause true-literal counts for O(occurrences) deltas."""

    def __init__(self, evaluator: ClauseViolations, values: np.ndarray):
        values = np.asarray(values)
        if np.any(values > 1) or np.any(values < 0):
            raise ContractError("tracker requires a fully specified binary assignment")
        self.evaluator = evaluator
        self.values = np.array(values, dtype=np.int64)
        self.counts = evaluator.true_literal_counts(values)
        self._violated = int((self.counts == 0).sum())

    def value(self):
        return self._violated

    def _flip_delta(self, pos: int, token: int) -> int:
        if token not in (0, 1):
            raise ContractError(f"token {token} outside the binary alphabet")
        if not 0 <= pos < len(self.values):
            raise ContractError(f"position {pos} out of range")
        if token == self.values[pos]:
            return 0
        clause_ids, polarity = self.evaluator._occ[pos]
        was_true = self.values[pos] == polarity
        counts = self.counts[clause_ids]
        newly_violated = int(((counts == 1) & was_true).sum())
        newly_satisfied = int(((counts == 0) & ~was_true).sum())
        return newly_violated - newly_satisfied

    def peek(self, pos, token):
        return self._violated + self._flip_delta(pos, token)

    def commit(self, pos, token):
        delta = self._flip_delta(pos, token)
        if token == self.values[pos]:
            return
        clause_ids, polarity = self.evaluator._occ[pos]
        was_true = self.values[pos] == polarity
        np.subtract.at(self.counts, clause_ids[was_true], 1)
        np.add.at(self.counts, clause_ids[~was_true], 1)
        if np.any(self.counts < 0):
            raise StaleTrackerError("negative clause count; tracker out of sync")
        self.values[pos] = token
        self._violated += delta


def sat_violation(formula: CnfFormula, values) -> int:
    """Count of unsatisfied clauses under a full assignment."""
    return int(ClauseViolations(formula).violation(values))


def sat_delta(formula: CnfFormula, values, pos: int) -> int:
    """Change in unsatisfied-clause count if position ``pos`` were flipped."""
    tracker = ClauseTracker(ClauseViolations(formula), values)
    return int(tracker.peek(pos, 1 - int(np.asarray(values)[pos])) - tracker.value())


def satisfying_assignments(formula: CnfFormula) -> np.ndarray:
    """All satisfying assignments as a (K, n) array of 0/1 tokens.

    Exhaustive enumeration, capped at ``ENUM_VAR_CAP`` variables; evaluated
    in chunks to bound memory.
    """
    n = formula.num_vars
    if n > ENUM_VAR_CAP:
        raise ConfigError(f"enumeration capped at {ENUM_VAR_CAP} variables, got {n}")
    found = []
    chunk = 1 << 14
    for start in range(0, 1 << n, chunk):
        codes = np.arange(start, min(start + chunk, 1 << n), dtype=np.int64)
        assignments = (codes[:, None] >> np.arange(n)) & 1
        ok = np.ones(len(codes), dtype=bool)
        for clause in formula.clauses:
            clause_sat = np.zeros(len(codes), dtype=bool)
            for lit in clause:
                clause_sat |= assignments[:, abs(lit) - 1] == (1 if lit > 0 else 0)
            ok &= clause_sat
            if not ok.any():
                break
        if ok.any():
            found.append(assignments[ok])
    if not found:
        return np.empty((0, n), dtype=np.int64)
    return np.concatenate(found, axis=0)


def is_satisfiable(formula: CnfFormula) -> bool:
    return satisfying_assignments(formula).shape[0] > 0


def parse_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF: ``p cnf n m`` header, zero-terminated clauses."""
    num_vars = num_clauses = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            fields = line.split()
            if len(fields) != 4 or fields[1] != "cnf":
                raise ParseError(f"bad header {line!r}", line_no)
            try:
                num_vars, num_clauses = int(fields[2]), int(fields[3])
            except ValueError:
                raise ParseError(f"bad header counts in {line!r}", line_no) from None
            continue
        if num_vars is None:
            raise ParseError("clause before 'p cnf' header", line_no)
        if line == "0" and not current:
            continue
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"bad literal {tok!r}", line_no) from None
            if lit == 0:
                if current:
                    clauses.append(tuple(current))
                    current = []
            else:
                if abs(lit) > num_vars:
                    raise ParseError(f"literal {lit} exceeds variable count", line_no)
                current.append(lit)
    if current:
        clauses.append(tuple(current))
    if num_vars is None:
        raise ParseError("missing 'p cnf' header")
    if num_clauses is not None and len(clauses) != num_clauses:
        raise ParseError(
            f"header declares {num_clauses} clauses, found {len(clauses)}")
    return CnfFormula(num_vars, tuple(clauses))


def load_dimacs(path) -> CnfFormula:
    with open(path, encoding="utf-8") as handle:
        return parse_dimacs(handle.read())


def render_dimacs(formula: CnfFormula) -> str:
    lines = [f"p cnf {formula.num_vars} {len(formula.clauses)}"]
    lines += [" ".join(str(lit) for lit in clause) + " 0" for clause in formula.clauses]
    return "\n".join(lines) + "\n"
