"""Generalized Sudoku: duplicate counting, solver, generator, and line io.

Boards use digits ``1 .. b*b`` with 0 for blanks; candidate sequences use
token ids ``digit - 1`` flattened row-major. A board of box size ``b`` has
``3 * b * b`` units (rows, columns, boxes).
"""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError, ContractError, ParseError
from ..vocab import Vocab
from .base import Constraint, ViolationTracker

SOLUTION_CAP = 10_000

_DIGIT_CHARS = "123456789ABCDEFGHIJKLMNOPQRSTUVW"


def digit_vocab(box: int) -> Vocab:
    side = box * box
    if side > len(_DIGIT_CHARS):
        raise ConfigError(f"box size {box} too large to render")
    return Vocab(tuple(_DIGIT_CHARS[:side]))


class SudokuBoard:
    """A puzzle: box size plus a grid with 0 marking blanks.

    Non-blank cells are the givens; they are frozen during sampling.
    """

    def __init__(self, box: int, grid: np.ndarray):
        if box < 2:
            raise ConfigError("box size must be at least 2")
        side = box * box
        grid = np.array(grid, dtype=np.int64)
        if grid.shape != (side, side):
            raise ConfigError(f"grid must be {side}x{side}, got {grid.shape}")
        if np.any(grid < 0) or np.any(grid > side):
            raise ConfigError(f"cells must be 0 (blank) or 1..{side}")
        grid.setflags(write=False)
        self.box = box
        self.grid = grid

    @property
    def side(self) -> int:
        return self.box * self.box

    def given_positions(self) -> np.ndarray:
        """Flat indices of the givens, ascending."""
        return np.flatnonzero(self.grid.ravel() != 0)

    def tokens(self) -> np.ndarray:
        """Flat token array; blanks become -1."""
        return self.grid.ravel() - 1

    def __eq__(self, other):
        return (isinstance(other, SudokuBoard) and self.box == other.box
                and np.array_equal(self.grid, other.grid))

    def __repr__(self):
        return f"SudokuBoard(box={self.box}, givens={len(self.given_positions())})"


def unit_indices(box: int) -> np.ndarray:
    """Flat cell indices of every row, column, and box unit."""
    side = box * box
    cells = np.arange(side * side).reshape(side, side)
    rows = [cells[r] for r in range(side)]
    cols = [cells[:, c] for c in range(side)]
    boxes = [cells[r:r + box, c:c + box].ravel()
             for r in range(0, side, box) for c in range(0, side, box)]
    return np.array(rows + cols + boxes)


class UnitDuplicates(Constraint):
    """Total duplicate count over all units: sum of max(0, count - 1)."""

    name = "units"

    def __init__(self, box: int):
        self.box = box
        self.side = box * box
        self.units = unit_indices(box)
        # the 3 units containing each cell, for O(1) edit deltas
        self.cell_units = np.empty((self.side * self.side, 3), dtype=np.int64)
        for ui, unit in enumerate(self.units):
            for cell in unit:
                row = self.cell_units[cell]
                row[0 if ui < self.side else 1 if ui < 2 * self.side else 2] = ui

    def violation(self, values):
        values = np.asarray(values)
        if values.shape != (self.side * self.side,):
            raise ContractError(
                f"expected {self.side * self.side} cells, got {values.shape}")
        if np.any(values < 0) or np.any(values >= self.side):
            raise ContractError("cell values outside the digit alphabet")
        grouped = np.sort(values[self.units], axis=1)
        distinct = 1 + (np.diff(grouped, axis=1) != 0).sum(axis=1)
        return int((self.side - distinct).sum())

    def tracker(self, values):
        return UnitTracker(self, values)


class UnitTracker(ViolationTracker):
    """Per-unit digit histograms; an edit touches exactly three units."""

    def __init__(self, evaluator: UnitDuplicates, values: np.ndarray):
        self.evaluator = evaluator
        self.values = np.array(values, dtype=np.int64)
        self._total = int(evaluator.violation(self.values))
        side = evaluator.side
        self.hist = np.zeros((len(evaluator.units), side), dtype=np.int64)
        for ui, unit in enumerate(evaluator.units):
            self.hist[ui] = np.bincount(self.values[unit], minlength=side)

    def value(self):
        return self._total

    def _delta(self, pos: int, token: int) -> int:
        if not 0 <= pos < len(self.values):
            raise ContractError(f"position {pos} out of range")
        if not 0 <= token < self.evaluator.side:
            raise ContractError(f"token {token} outside the digit alphabet")
        old = self.values[pos]
        if token == old:
            return 0
        delta = 0
        for ui in self.evaluator.cell_units[pos]:
            if self.hist[ui, old] >= 2:
                delta -= 1
            if self.hist[ui, token] >= 1:
                delta += 1
        return delta

    def peek(self, pos, token):
        return self._total + self._delta(pos, token)

    def commit(self, pos, token):
        delta = self._delta(pos, token)
        old = self.values[pos]
        if token == old:
            return
        for ui in self.evaluator.cell_units[pos]:
            self.hist[ui, old] -= 1
            self.hist[ui, token] += 1
        self.values[pos] = token
        self._total += delta


def sudoku_violation(grid: np.ndarray, box: int | None = None) -> int:
    """Duplicate count of a fully specified digit grid."""
    grid = np.asarray(grid)
    if box is None:
        box = int(round(grid.shape[0] ** 0.5))
    if np.any(grid < 1):
        raise ContractError("grid must be fully specified (no blanks)")
    return int(UnitDuplicates(box).violation(grid.ravel() - 1))


def sudoku_delta(grid: np.ndarray, cell: tuple[int, int], new_digit: int,
                 box: int | None = None) -> int:
    """Duplicate-count change from rewriting one cell of a full grid."""
    grid = np.asarray(grid)
    if box is None:
        box = int(round(grid.shape[0] ** 0.5))
    tracker = UnitTracker(UnitDuplicates(box), grid.ravel() - 1)
    pos = cell[0] * box * box + cell[1]
    return int(tracker.peek(pos, new_digit - 1) - tracker.value())


def _used_digit_masks(board_tokens: np.ndarray, units) -> np.ndarray:
    unit_used = np.zeros(len(units), dtype=np.int64)
    for ui, unit in enumerate(units):
        for cell in unit:
            tok = board_tokens[cell]
            if tok >= 0:
                unit_used[ui] |= 1 << int(tok)
    return unit_used


def completions(board: SudokuBoard, limit: int = SOLUTION_CAP) -> list[np.ndarray]:
    """All full solutions consistent with the givens, up to ``limit``.

    Deterministic backtracking with a most-constrained-cell heuristic;
    solutions come out as flat token arrays.
    """
    side = board.side
    evaluator = UnitDuplicates(board.box)
    tokens = board.tokens().copy()
    unit_used = _used_digit_masks(tokens, evaluator.units)
    full = (1 << side) - 1
    blanks = [int(p) for p in np.flatnonzero(tokens < 0)]
    out: list[np.ndarray] = []

    def cell_options(pos):
        used = 0
        for ui in evaluator.cell_units[pos]:
            used |= unit_used[ui]
        return full & ~used

    def recurse():
        if len(out) >= limit:
            return
        best_pos, best_opts, best_count = -1, 0, side + 1
        for pos in blanks:
            if tokens[pos] >= 0:
                continue
            opts = cell_options(pos)
            count = bin(opts).count("1")
            if count == 0:
                return
            if count < best_count:
                best_pos, best_opts, best_count = pos, opts, count
                if count == 1:
                    break
        if best_pos < 0:
            out.append(tokens.copy())
            return
        for tok in range(side):
            if not best_opts & (1 << tok):
                continue
            tokens[best_pos] = tok
            for ui in evaluator.cell_units[best_pos]:
                unit_used[ui] |= 1 << tok
            recurse()
            tokens[best_pos] = -1
            for ui in evaluator.cell_units[best_pos]:
                unit_used[ui] &= ~(1 << tok)
            if len(out) >= limit:
                return

    recurse()
    return out


def random_solution(box: int, rng: np.random.Generator) -> np.ndarray:
    """A uniform-ish random complete grid (digits), by randomized backtracking."""
    side = box * box
    evaluator = UnitDuplicates(box)
    tokens = np.full(side * side, -1, dtype=np.int64)
    unit_used = np.zeros(len(evaluator.units), dtype=np.int64)
    full = (1 << side) - 1

    def fill(index):
        if index == side * side:
            return True
        used = 0
        for ui in evaluator.cell_units[index]:
            used |= unit_used[ui]
        options = [tok for tok in range(side) if not used & (1 << tok)]
        if not options:
            return False
        rng.shuffle(options)
        for tok in options:
            tokens[index] = tok
            for ui in evaluator.cell_units[index]:
                unit_used[ui] |= 1 << tok
            if fill(index + 1):
                return True
            tokens[index] = -1
            for ui in evaluator.cell_units[index]:
                unit_used[ui] &= ~(1 << tok)
        return False

    if not fill(0):
        raise RuntimeError("backtracking failed to build a full grid")
    return (tokens + 1).reshape(side, side)


def random_puzzle(box: int, blanks: int, rng: np.random.Generator) -> SudokuBoard:
    """Blank ``blanks`` random cells of a random full grid.

    The seed solution guarantees at least one completion; uniqueness is not
    enforced.
    """
    side = box * box
    if not 0 <= blanks < side * side:
        raise ConfigError(f"blank count must be in [0, {side * side})")
    grid = random_solution(box, rng).ravel()
    holes = rng.choice(side * side, size=blanks, replace=False)
    grid[holes] = 0
    return SudokuBoard(box, grid.reshape(side, side))


def parse_sudoku_line(line: str) -> SudokuBoard:
    """Board from one line of ``b**4`` characters; ``.`` or ``0`` is blank."""
    line = line.strip()
    box = round(len(line) ** 0.25)
    if box < 2 or box ** 4 != len(line):
        raise ParseError(f"line length {len(line)} is not a 4th power >= 16")
    vocab = digit_vocab(box)
    cells = []
    for ch in line:
        if ch in ".0":
            cells.append(0)
        else:
            try:
                cells.append(vocab.index(ch) + 1)
            except KeyError:
                raise ParseError(f"bad cell character {ch!r}") from None
    side = box * box
    return SudokuBoard(box, np.array(cells).reshape(side, side))


def render_sudoku_line(board: SudokuBoard) -> str:
    vocab = digit_vocab(board.box)
    return "".join("." if v == 0 else vocab.symbols[v - 1]
                   for v in board.grid.ravel())


def read_puzzles(path) -> list[SudokuBoard]:
    boards = []
    with open(path, encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                boards.append(parse_sudoku_line(line))
            except ParseError as exc:
                raise ParseError(str(exc), line_no) from None
    return boards
