import numpy as np
import pytest

from mdsearch.constraints.sudoku import (
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
    unit_indices,
)
from mdsearch.errors import ConfigError, ContractError, ParseError

from oracles import naive_sudoku_violation

VALID_4X4 = np.array([
    [1, 2, 3, 4],
    [3, 4, 1, 2],
    [2, 1, 4, 3],
    [4, 3, 2, 1],
])


def test_unit_structure():
    assert unit_indices(2).shape == (12, 4)
    assert unit_indices(3).shape == (27, 9)  # the classic 27 units


def test_violation_examples():
    assert sudoku_violation(VALID_4X4) == 0
    grid = VALID_4X4.copy()
    grid[0] = [1, 1, 2, 3]  # duplicate 1 in the first row
    assert sudoku_violation(grid) == naive_sudoku_violation(grid)
    with pytest.raises(ContractError):
        sudoku_violation(np.zeros((4, 4), dtype=int))
    with pytest.raises(ContractError):
        UnitDuplicates(2).violation(np.full(16, 9))


def test_violation_matches_naive_oracle():
    rng = np.random.default_rng(0)
    evaluator = UnitDuplicates(2)
    for _ in range(500):
        grid = rng.integers(1, 5, size=(4, 4))
        assert evaluator.violation(grid.ravel() - 1) == naive_sudoku_violation(grid)
    evaluator9 = UnitDuplicates(3)
    for _ in range(100):
        grid = rng.integers(1, 10, size=(9, 9))
        assert evaluator9.violation(grid.ravel() - 1) == naive_sudoku_violation(grid)


def test_violation_transpose_invariant():
    rng = np.random.default_rng(1)
    for _ in range(100):
        grid = rng.integers(1, 5, size=(4, 4))
        assert sudoku_violation(grid) == sudoku_violation(grid.T)


def test_delta_examples():
    assert sudoku_delta(VALID_4X4, (0, 0), 1) == 0  # rewrite to itself
    assert sudoku_delta(VALID_4X4, (0, 0), 2) > 0   # introduces duplicates
    grid = VALID_4X4.copy()
    delta = sudoku_delta(grid, (0, 1), 1)
    # duplicate 1 lands in row 0 and box 0; column 1 had no 1 there
    assert delta == naive_sudoku_violation(_edited(grid, 0, 1, 1)) - 0


def _edited(grid, r, c, digit):
    out = grid.copy()
    out[r, c] = digit
    return out


def test_tracker_matches_recomputation():
    rng = np.random.default_rng(2)
    evaluator = UnitDuplicates(2)
    for _ in range(20):
        grid = rng.integers(1, 5, size=(4, 4))
        tracker = evaluator.tracker(grid.ravel() - 1)
        work = grid.copy()
        for _ in range(50):
            r, c = int(rng.integers(4)), int(rng.integers(4))
            digit = int(rng.integers(1, 5))
            expected = naive_sudoku_violation(_edited(work, r, c, digit))
            assert tracker.peek(r * 4 + c, digit - 1) == expected
            if rng.random() < 0.5:
                tracker.commit(r * 4 + c, digit - 1)
                work[r, c] = digit
                assert tracker.value() == naive_sudoku_violation(work)


def test_board_and_line_roundtrip():
    line = ".1..2..13.1.14.3"
    board = parse_sudoku_line(line)
    assert board.box == 2
    assert render_sudoku_line(board) == line
    assert parse_sudoku_line(render_sudoku_line(board)) == board
    with pytest.raises(ParseError):
        parse_sudoku_line("123")
    with pytest.raises(ParseError):
        parse_sudoku_line("x" * 16)


def test_board_validation():
    with pytest.raises(ConfigError):
        SudokuBoard(2, np.zeros((3, 3), dtype=int))
    with pytest.raises(ConfigError):
        SudokuBoard(2, np.full((4, 4), 9))


def test_read_puzzles(tmp_path):
    path = tmp_path / "puzzles.txt"
    path.write_text("# header\n.1..2..13.1.14.3\n\n1234341221434321\n", encoding="utf-8")
    boards = read_puzzles(path)
    assert len(boards) == 2
    path.write_text(".1..2..13.1.14.3\nbadline\n", encoding="utf-8")
    with pytest.raises(ParseError) as err:
        read_puzzles(path)
    assert "line 2" in str(err.value)


def test_completions_and_generator():
    rng = np.random.default_rng(3)
    # blanks=0: the puzzle is its own unique completion and is valid
    full = random_puzzle(2, 0, rng)
    assert sudoku_violation(full.grid) == 0
    assert len(completions(full)) == 1

    puzzle = random_puzzle(2, 8, rng)
    sols = completions(puzzle)
    assert sols, "generated puzzle must accept its seed solution"
    evaluator = UnitDuplicates(2)
    givens = puzzle.given_positions()
    tokens = puzzle.tokens()
    for sol in sols:
        assert evaluator.violation(sol) == 0
        assert np.array_equal(sol[givens], tokens[givens])


def test_random_solution_is_valid_9x9():
    grid = random_solution(3, np.random.default_rng(4))
    assert sudoku_violation(grid) == 0


def test_completion_cap():
    # an empty 4x4 board has 288 solutions; the cap truncates enumeration
    empty = SudokuBoard(2, np.zeros((4, 4), dtype=int))
    assert len(completions(empty)) == 288
    assert len(completions(empty, limit=10)) == 10


def test_generator_blank_count_bounds():
    with pytest.raises(ConfigError):
        random_puzzle(2, 16, np.random.default_rng(0))


def test_digit_vocab_hex_rendering():
    vocab = digit_vocab(3)
    assert vocab.symbols[:9] == ("1", "2", "3", "4", "5", "6", "7", "8", "9")
    vocab16 = digit_vocab(4)
    assert vocab16.symbols[9] == "A"
    assert vocab16.size == 16
