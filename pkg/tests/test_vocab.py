import numpy as np
import pytest
from hypothesis import given, strategies as st

from mdsearch.errors import ConfigError, ContractError, InadmissibleEditError
from mdsearch.vocab import (
    EditableRegion,
    Vocab,
    apply_edit,
    fully_masked,
    masked_positions,
)

AB = Vocab(("A", "B", "C", "D"))
BIN = Vocab(("0", "1"))


def test_vocab_basics():
    assert AB.size == 4
    assert AB.mask_id == 4
    assert AB.index("C") == 2
    assert AB.is_token(3) and not AB.is_token(4)
    with pytest.raises(KeyError):
        AB.index("Z")


def test_vocab_validation():
    with pytest.raises(ConfigError):
        Vocab(())
    with pytest.raises(ConfigError):
        Vocab(("A", "A"))
    with pytest.raises(ConfigError):
        Vocab(("A", "?"))


def test_render_parse_roundtrip():
    seq = np.array([0, 4, 2, 1])
    assert AB.render(seq) == "A?CB"
    assert np.array_equal(AB.parse("A?CB"), seq)
    with pytest.raises(ContractError):
        AB.parse("AXB")
    with pytest.raises(ContractError):
        AB.render(np.array([9]))


def test_region_helpers():
    region = EditableRegion.with_frozen(4, {0, 2})
    assert region.positions == (1, 3)
    assert region.frozen == (0, 2)
    assert region.is_editable(1) and not region.is_editable(0)
    assert EditableRegion.all_editable(3).positions == (0, 1, 2)
    with pytest.raises(ConfigError):
        EditableRegion(3, frozenset({5}))
    with pytest.raises(ConfigError):
        EditableRegion(0, frozenset())


def test_fully_masked_all_editable():
    region = EditableRegion.all_editable(3)
    out = fully_masked(3, region, AB.mask_id)
    assert np.array_equal(out, [4, 4, 4])


def test_fully_masked_with_frozen():
    region = EditableRegion.with_frozen(3, {0})
    frozen = np.array([0, 0, 0])
    out = fully_masked(3, region, AB.mask_id, frozen)
    assert np.array_equal(out, [0, 4, 4])


def test_fully_masked_sat_shape():
    # assignment bits all editable; the formula lives outside the sequence
    region = EditableRegion.all_editable(7)
    out = fully_masked(7, region, BIN.mask_id)
    assert np.array_equal(out, np.full(7, 2))


def test_fully_masked_errors():
    region = EditableRegion.with_frozen(3, {0})
    with pytest.raises(ConfigError):
        fully_masked(4, region, AB.mask_id)
    with pytest.raises(ConfigError):
        fully_masked(3, region, AB.mask_id)  # missing frozen values
    with pytest.raises(ConfigError):
        fully_masked(3, region, AB.mask_id, np.array([0, 0]))
    with pytest.raises(ConfigError):
        fully_masked(3, region, AB.mask_id, np.array([AB.mask_id, 0, 0]))


def test_masked_positions():
    m = AB.mask_id
    assert set(masked_positions(np.array([m, m, m]), m)) == {0, 1, 2}
    assert set(masked_positions(np.array([0, m, 1]), m)) == {1}
    assert masked_positions(np.array([0, 1, 2]), m).size == 0


def test_fully_masked_reports_editable_set():
    region = EditableRegion.with_frozen(5, {1, 4})
    out = fully_masked(5, region, AB.mask_id, np.array([0, 1, 0, 0, 2]))
    assert tuple(masked_positions(out, AB.mask_id)) == region.positions


def test_apply_edit():
    region = EditableRegion.all_editable(3)
    seq = np.array([0, 1, 2])
    out = apply_edit(seq, 1, 3, region, AB)
    assert np.array_equal(out, [0, 3, 2])
    assert np.array_equal(seq, [0, 1, 2])  # input untouched
    out2 = apply_edit(np.zeros(7, dtype=np.int64), 3, 1, EditableRegion.all_editable(7), BIN)
    assert np.array_equal(out2, [0, 0, 0, 1, 0, 0, 0])


def test_apply_edit_rejections():
    region = EditableRegion.with_frozen(3, {0})
    seq = np.array([0, 1, 2])
    with pytest.raises(InadmissibleEditError):
        apply_edit(seq, 0, 1, region, AB)
    with pytest.raises(InadmissibleEditError):
        apply_edit(seq, 1, AB.mask_id, region, AB)
    with pytest.raises(ContractError):
        apply_edit(seq, 9, 1, region, AB)


@given(st.data())
def test_apply_edit_invertible(data):
    length = data.draw(st.integers(2, 8))
    seq = np.array(data.draw(st.lists(st.integers(0, 3), min_size=length,
                                      max_size=length)))
    pos = data.draw(st.integers(0, length - 1))
    token = data.draw(st.integers(0, 3))
    region = EditableRegion.all_editable(length)
    edited = apply_edit(seq, pos, token, region, AB)
    restored = apply_edit(edited, pos, int(seq[pos]), region, AB)
    assert np.array_equal(restored, seq)
