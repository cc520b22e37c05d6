import dataclasses
import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from margincount import (
    BadMargins,
    CellMask,
    LengthMismatch,
    Margins,
    NegativeEntry,
    OutOfRange,
    Unbalanced,
    clone_margins,
    dominates,
    enumerate_01,
    gale_ryser_feasible,
    validate_margins,
)

from helpers import balanced_pairs


class TestMargins:
    def test_basic_properties(self):
        m = Margins((2, 2, 1), (3, 2))
        assert m.m == 3 and m.n == 2
        assert m.total == 5
        assert m.rows == (2, 2, 1)
        assert m.cols == (3, 2)

    def test_transpose(self):
        m = Margins((2, 2, 1), (3, 2))
        t = m.transpose()
        assert t.rows == (3, 2) and t.cols == (2, 2, 1)
        assert t.transpose() == m

    def test_to_dict(self):
        assert Margins((1, 1), (2,)).to_dict() == {"rows": [1, 1], "cols": [2]}

    def test_unbalanced(self):
        with pytest.raises(Unbalanced):
            Margins((1, 2), (4,))

    def test_negative_entry(self):
        with pytest.raises(NegativeEntry):
            Margins((1, -1), (0,))

    def test_non_integer_entry(self):
        with pytest.raises(NegativeEntry):
            Margins((1.5, 0.5), (2,))

    def test_integral_floats_accepted(self):
        m = Margins((2.0, 1.0), (3.0,))
        assert m.rows == (2, 1) and isinstance(m.rows[0], int)

    def test_empty_vector(self):
        with pytest.raises(LengthMismatch):
            Margins((), (0,))

    def test_immutable(self):
        m = Margins((1,), (1,))
        with pytest.raises(dataclasses.FrozenInstanceError):
            m.rows = (2,)

    def test_validate_margins_wrapper(self):
        assert validate_margins([1, 2], [3]) == Margins((1, 2), (3,))


class TestCellMask:
    def test_from_strings_round_trip(self):
        mask = CellMask.from_strings(["101", "010"])
        assert mask.shape == (2, 3)
        assert mask.to_strings() == ["101", "010"]
        assert mask == CellMask([[True, False, True], [False, True, False]])

    def test_bad_characters(self):
        with pytest.raises(LengthMismatch):
            CellMask.from_strings(["1x1"])

    def test_ragged_rows(self):
        with pytest.raises(LengthMismatch):
            CellMask.from_strings(["10", "1"])

    def test_empty(self):
        with pytest.raises(LengthMismatch):
            CellMask.from_strings([])

    def test_grid_is_read_only(self):
        mask = CellMask.from_strings(["10", "01"])
        with pytest.raises(ValueError):
            mask.grid[0, 0] = False

    def test_validate_shape(self):
        mask = CellMask.from_strings(["10", "01"])
        with pytest.raises(LengthMismatch):
            mask.validate_against(Margins((1, 1, 1), (2, 1)))

    def test_validate_blocked_row(self):
        mask = CellMask.from_strings(["00", "11"])
        with pytest.raises(BadMargins):
            mask.validate_against(Margins((1, 1), (1, 1)))

    def test_validate_blocked_column_zero_margin_ok(self):
        # a fully blocked column is fine when its margin is zero
        mask = CellMask.from_strings(["10", "10"])
        mask.validate_against(Margins((1, 1), (2, 0)))


class TestGaleRyser:
    def test_known_infeasible(self):
        assert not gale_ryser_feasible(Margins((2, 2, 0), (3, 1, 0)))

    def test_known_feasible(self):
        assert gale_ryser_feasible(Margins((2, 2, 1), (2, 2, 1)))

    def test_entry_exceeding_opposite_dimension(self):
        assert not gale_ryser_feasible(Margins((4,), (2, 1, 1)))  # r > n
        assert not gale_ryser_feasible(Margins((1, 2), (3,)))  # c > m

    def test_all_zero(self):
        assert gale_ryser_feasible(Margins((0, 0), (0,)))

    def test_agrees_with_enumeration_small_family(self):
        for margins in balanced_pairs(3, 3):
            nonempty = len(enumerate_01(margins)) > 0
            assert gale_ryser_feasible(margins) == nonempty, margins

    def test_transpose_invariance(self):
        for margins in balanced_pairs(3, 3):
            assert gale_ryser_feasible(margins) == gale_ryser_feasible(
                margins.transpose()
            )


class TestDominates:
    def test_reflexive(self):
        assert dominates((3, 1, 2), (2, 3, 1))

    def test_known_pair(self):
        assert dominates((3, 1, 0), (2, 2, 0))
        assert not dominates((2, 2, 0), (3, 1, 0))

    def test_unequal_totals(self):
        assert not dominates((3, 1), (2, 1))

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            dominates((1, 2), (3,))

    @given(
        st.lists(st.integers(min_value=0, max_value=6), min_size=2, max_size=5),
        st.data(),
    )
    @settings(max_examples=100)
    def test_transfer_moves_up(self, vec, data):
        """Moving a unit from a poorer to a richer entry ascends the order."""
        pairs = [
            (i, j)
            for i in range(len(vec))
            for j in range(len(vec))
            if i != j and vec[j] > 0 and vec[i] >= vec[j]
        ]
        if not pairs:
            return
        i, j = data.draw(st.sampled_from(pairs))
        stronger = list(vec)
        stronger[i] += 1
        stronger[j] -= 1
        assert dominates(stronger, vec)


class TestCloneMargins:
    def test_identity(self):
        m = Margins((2, 1), (2, 1))
        assert clone_margins(m, 1) == m

    def test_k2(self):
        m = Margins((2, 1), (3,))
        c = clone_margins(m, 2)
        assert c.rows == (4, 4, 2, 2)
        assert c.cols == (6, 6)
        assert c.total == 4 * m.total

    def test_bad_factor(self):
        with pytest.raises(OutOfRange):
            clone_margins(Margins((1,), (1,)), 0)

    def test_preserves_feasibility(self):
        for margins in itertools.islice(balanced_pairs(3, 3), 0, None, 7):
            if gale_ryser_feasible(margins):
                assert gale_ryser_feasible(clone_margins(margins, 2)), margins
