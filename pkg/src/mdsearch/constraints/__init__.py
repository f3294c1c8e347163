"""Black-box violation evaluators for the supported tasks."""

from .base import (
    Constraint,
    FullRecomputeTracker,
    ViolationReport,
    ViolationTracker,
    lexicographic_compare,
    tier_key,
)
from .peptide import (
    PeptideSpec,
    peptide_constraints,
    peptide_violation,
    read_peptides,
    residue_vocab,
)
from .sat import (
    ClauseViolations,
    CnfFormula,
    assignment_vocab,
    is_satisfiable,
    load_dimacs,
    parse_dimacs,
    render_dimacs,
    sat_delta,
    sat_violation,
    satisfying_assignments,
)
from .sudoku import (
    SudokuBoard,
    UnitDuplicates,
    completions,
    digit_vocab,
    parse_sudoku_line,
    random_puzzle,
    random_solution,
    read_puzzles,
    render_sudoku_line,
    sudoku_delta,
    sudoku_violation,
)

__all__ = [
    "Constraint",
    "FullRecomputeTracker",
    "ViolationReport",
    "ViolationTracker",
    "lexicographic_compare",
    "tier_key",
    "PeptideSpec",
    "peptide_constraints",
    "peptide_violation",
    "read_peptides",
    "residue_vocab",
    "ClauseViolations",
    "CnfFormula",
    "assignment_vocab",
    "is_satisfiable",
    "load_dimacs",
    "parse_dimacs",
    "render_dimacs",
    "sat_delta",
    "sat_violation",
    "satisfying_assignments",
    "SudokuBoard",
    "UnitDuplicates",
    "completions",
    "digit_vocab",
    "parse_sudoku_line",
    "random_puzzle",
    "random_solution",
    "read_puzzles",
    "render_sudoku_line",
    "sudoku_delta",
    "sudoku_violation",
]
