import numpy as np
import pytest

from mdsearch.constraints.peptide import (
    PeptideSpec,
    TERMINATOR,
    logical_length,
    peptide_constraints,
    peptide_string,
    peptide_violation,
    read_peptides,
    residue_vocab,
)
from mdsearch.errors import ContractError

from oracles import naive_peptide_report

VOCAB = residue_vocab()
SPEC = PeptideSpec()
TERM = VOCAB.index(TERMINATOR)


def tokens(residues: str, slots: int | None = None) -> np.ndarray:
    values = VOCAB.parse(residues)
    if slots is None:
        return values
    out = np.full(slots, TERM, dtype=np.int64)
    out[:len(values)] = values
    return out


def test_vocab_shape():
    assert VOCAB.size == 21
    assert VOCAB.symbols[-1] == TERMINATOR


def test_logical_length_and_rendering():
    values = tokens("KKLL", slots=8)
    assert logical_length(values, TERM) == 4
    assert peptide_string(values, VOCAB) == "KKLL"
    assert logical_length(tokens("KKLL"), TERM) == 4  # no terminator present


def test_feasible_example():
    report = peptide_violation("KKLLLAAAWW")
    assert report.values == (0.0, 0.0, 0.0)
    assert report.feasible


def test_charge_hinge_example():
    report = peptide_violation("G" * 10)
    assert report.values[1] == 2.0  # charge 0, window starts at +2


def test_length_hinge_example():
    report = peptide_violation("KKLLLAAAW")  # nine residues
    assert report.values[0] == 1.0


def test_reports_match_naive_oracle():
    rng = np.random.default_rng(0)
    letters = np.array(list("ACDEFGHIKLMNPQRSTVWY"))
    for _ in range(500):
        n = int(rng.integers(0, 60))
        residues = "".join(rng.choice(letters, size=n))
        report = peptide_violation(residues)
        assert report.values == naive_peptide_report(residues)


def test_count_based_properties_are_order_free():
    rng = np.random.default_rng(1)
    residues = list("KKDDLLAAWWGGHH")
    base = peptide_violation("".join(residues))
    for _ in range(20):
        rng.shuffle(residues)
        report = peptide_violation("".join(residues))
        assert report.values[1:] == base.values[1:]


def test_unknown_residue_rejected():
    with pytest.raises(ContractError):
        peptide_violation("KKLLZ")


def test_trackers_match_full_evaluation():
    rng = np.random.default_rng(2)
    constraints = peptide_constraints(SPEC, VOCAB)
    for _ in range(15):
        values = rng.integers(0, VOCAB.size, size=30)
        trackers = [c.tracker(values) for c in constraints]
        work = values.copy()
        for _ in range(60):
            pos = int(rng.integers(30))
            token = int(rng.integers(VOCAB.size))
            probe = work.copy()
            probe[pos] = token
            for c, tr in zip(constraints, trackers):
                assert tr.peek(pos, token) == pytest.approx(c.violation(probe), abs=0)
            if rng.random() < 0.4:
                for tr in trackers:
                    tr.commit(pos, token)
                work[pos] = token
                for c, tr in zip(constraints, trackers):
                    assert tr.value() == pytest.approx(c.violation(work), abs=0)


def test_tracker_blocks_match_scalar_peeks():
    rng = np.random.default_rng(3)
    constraints = peptide_constraints(SPEC, VOCAB)
    for _ in range(10):
        values = rng.integers(0, VOCAB.size, size=20)
        positions = np.arange(20)
        for c in constraints:
            tracker = c.tracker(values)
            block = tracker.peek_block(positions, VOCAB.size)
            for i in range(20):
                for token in range(VOCAB.size):
                    assert block[i, token] == pytest.approx(
                        tracker.peek(int(i), token), abs=0)


def test_terminator_edits_change_length_scope():
    # KKKKKKKKKK-LLLL... : removing the terminator pulls the tail into scope
    values = tokens("KKKKKKKKKK", slots=15)
    values[11:] = VOCAB.index("L")
    constraints = peptide_constraints(SPEC, VOCAB)
    length = constraints[0]
    tracker = length.tracker(values)
    assert tracker.value() == 0.0
    # placing an earlier terminator shortens the peptide below the window
    assert tracker.peek(4, TERM) == 6.0
    # replacing the terminator with a residue extends to the next one (none -> 15)
    assert tracker.peek(10, VOCAB.index("A")) == 0.0


def test_empty_peptide():
    report = peptide_violation("")
    assert report.values[0] == 10.0
    assert report.values[2] == pytest.approx(0.30)


def test_read_peptides(tmp_path):
    path = tmp_path / "peps.txt"
    path.write_text("# set\nKKLLLAAAWW\n\nGGG\n", encoding="utf-8")
    assert read_peptides(path) == ["KKLLLAAAWW", "GGG"]
