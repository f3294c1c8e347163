import numpy as np
import pytest

from mdsearch.constraints.base import (
    Constraint,
    FullRecomputeTracker,
    ViolationReport,
    lexicographic_compare,
    tier_key,
)
from mdsearch.errors import ContractError
from mdsearch.search import aggregate_violation


class Fixed(Constraint):
    def __init__(self, name, value):
        self.name = name
        self._value = value

    def violation(self, values):
        return self._value


def test_weighted_sum_examples():
    values = np.zeros(3, dtype=np.int64)
    report = aggregate_violation(values, (Fixed("a", 2.0), Fixed("b", 3.0)))
    assert report.total == 5.0
    report = aggregate_violation(values, (Fixed("a", 7.0), Fixed("b", 0.0)),
                                 weights=(0.0, 1.0))
    assert report.total == 0.0
    assert not report.feasible  # zero-weighted violation still infeasible


def test_feasibility_is_zero_vector():
    values = np.zeros(1, dtype=np.int64)
    assert aggregate_violation(values, (Fixed("a", 0.0),)).feasible
    assert not aggregate_violation(values, (Fixed("a", 0.5),)).feasible


def test_weight_arity_checked():
    with pytest.raises(ContractError):
        aggregate_violation(np.zeros(1), (Fixed("a", 1.0),), weights=(1.0, 2.0))
    with pytest.raises(ContractError):
        ViolationReport((1.0,), (1.0, 2.0))


def test_negative_violation_rejected():
    with pytest.raises(ContractError):
        aggregate_violation(np.zeros(1), (Fixed("a", -1.0),))


def test_lexicographic_examples():
    a = ViolationReport((0.0, 5.0), (1.0, 1.0))
    b = ViolationReport((1.0, 0.0), (1.0, 1.0))
    assert lexicographic_compare(a, b, (0, 1)) == -1  # first tier dominates
    assert lexicographic_compare(b, a, (0, 1)) == 1
    assert lexicographic_compare(a, a, (0, 1)) == 0
    # reversed priority flips the preference
    assert lexicographic_compare(a, b, (1, 0)) == 1


def test_lexicographic_single_tier_matches_total():
    a = ViolationReport((2.0,), (1.0,))
    b = ViolationReport((3.0,), (1.0,))
    assert lexicographic_compare(a, b, (0,)) == -1
    assert (a.total < b.total)


def test_lexicographic_arity_and_order_checks():
    a = ViolationReport((0.0, 1.0), (1.0, 1.0))
    b = ViolationReport((0.0,), (1.0,))
    with pytest.raises(ContractError):
        lexicographic_compare(a, b, (0,))
    with pytest.raises(ContractError):
        tier_key(a, (0, 7))


def test_tier_key_attached_by_aggregate():
    report = aggregate_violation(np.zeros(1), (Fixed("a", 1.0), Fixed("b", 2.0)),
                                 tier_order=(1, 0))
    assert report.tiers == (2.0, 1.0)


def test_full_recompute_tracker_consistency():
    class CountOnes(Constraint):
        name = "ones"

        def violation(self, values):
            return float((np.asarray(values) == 1).sum())

    values = np.array([0, 1, 1, 0])
    tracker = CountOnes().tracker(values)
    assert isinstance(tracker, FullRecomputeTracker)
    assert tracker.value() == 2.0
    assert tracker.peek(0, 1) == 3.0
    assert tracker.value() == 2.0  # peek must not mutate
    tracker.commit(0, 1)
    assert tracker.value() == 3.0
