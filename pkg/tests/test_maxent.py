import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from margincount import (
    BadMargins,
    CellMask,
    DomainViolation,
    DualPoint,
    Margins,
    MaxEntSolution,
    NoInterior,
    OutOfRange,
    bounds_01,
    bounds_nonneg,
    count_01,
    count_nonneg,
    entropy_g,
    entropy_h,
    log_vdw_offset_01,
    objective_G,
    solve_maxent_01,
    solve_maxent_nonneg,
)

from helpers import balanced_pairs, canonical

INTERIOR_01 = [
    Margins((1, 1), (1, 1)),
    Margins((2, 2, 1), (2, 2, 1)),
    Margins((2, 1, 1), (1, 1, 1, 1)),
    Margins((3, 2, 2, 1), (2, 2, 2, 2)),
    Margins((2,) * 4, (2,) * 4),
]

INTERIOR_NN = [
    Margins((1,), (1,)),
    Margins((3, 3), (4, 2)),
    Margins((2, 2, 1), (2, 2, 1)),
    Margins((5, 3, 1), (3, 3, 3)),
    Margins((4, 1, 1, 1), (2, 2, 2, 1)),
]


class TestEntropies:
    def test_half_matrix(self):
        z = np.full((2, 3), 0.5)
        assert entropy_h(z) == pytest.approx(6 * math.log(2), rel=1e-14)

    def test_boundary_entries_contribute_zero(self):
        assert entropy_h(np.array([[0.0, 1.0]])) == 0.0

    def test_h_out_of_range(self):
        with pytest.raises(OutOfRange):
            entropy_h(np.array([[1.2]]))
        with pytest.raises(OutOfRange):
            entropy_h(np.array([[-0.1]]))

    def test_g_known_value(self):
        # (1+z)ln(1+z) - z ln z at z = 1 is 2 ln 2
        assert entropy_g(np.array([[1.0]])) == pytest.approx(math.log(4), rel=1e-14)

    def test_g_zero(self):
        assert entropy_g(np.array([[0.0]])) == 0.0

    def test_g_out_of_range(self):
        with pytest.raises(OutOfRange):
            entropy_g(np.array([[-0.5]]))


class TestObjective:
    def test_zero_one_at_origin(self):
        m = Margins((2, 2, 1), (2, 2, 1))
        value, grad = objective_G("zero-one", m, DualPoint(np.zeros(3), np.zeros(3)))
        assert value == pytest.approx(9 * math.log(2), rel=1e-14)
        expect = np.concatenate(
            [3 * 0.5 - np.array(m.rows), 3 * 0.5 - np.array(m.cols)]
        )
        assert np.abs(grad - expect).max() < 1e-14

    def test_nonneg_domain_violation(self):
        m = Margins((1, 1), (1, 1))
        with pytest.raises(DomainViolation):
            objective_G("nonneg", m, DualPoint(np.zeros(2), np.zeros(2)))

    @pytest.mark.parametrize("mode", ["zero-one", "nonneg"])
    def test_gradient_matches_finite_differences(self, mode):
        rng = np.random.default_rng(42)
        m = Margins((2, 2, 1), (2, 2, 1))
        eps = 1e-6
        for _ in range(10):
            s = rng.normal(size=3)
            t = rng.normal(size=3)
            if mode == "nonneg":
                # shift into the open domain s_i + t_j > 0
                t = np.abs(t) + np.abs(s).max() + 0.1
            _, grad = objective_G(mode, m, DualPoint(s, t))
            for k in range(6):
                dp, dm = np.zeros(3), np.zeros(3)
                sp, tp = s.copy(), t.copy()
                sm, tm = s.copy(), t.copy()
                if k < 3:
                    sp[k] += eps
                    sm[k] -= eps
                else:
                    tp[k - 3] += eps
                    tm[k - 3] -= eps
                vp, _ = objective_G(mode, m, DualPoint(sp, tp))
                vm, _ = objective_G(mode, m, DualPoint(sm, tm))
                fd = (vp - vm) / (2 * eps)
                assert abs(grad[k] - fd) <= 1e-5 * (1 + abs(grad[k]))


class TestSolve01:
    def test_uniform_closed_form(self):
        sol = solve_maxent_01(Margins((1, 1), (1, 1)))
        assert np.abs(sol.Z - 0.5).max() < 1e-12
        assert sol.entropy == pytest.approx(math.log(16), rel=1e-10)
        assert sol.log_alpha == pytest.approx(math.log(16), rel=1e-10)

    @pytest.mark.parametrize("margins", INTERIOR_01, ids=str)
    def test_certificates(self, margins):
        sol = solve_maxent_01(margins)
        N = margins.total
        assert sol.mode == "zero-one"
        assert sol.residual <= 1e-10 * (1 + N)
        assert abs(sol.dual.s.sum()) < 1e-9  # gauge
        assert sol.Z.min() > 0.0 and sol.Z.max() < 1.0
        assert np.abs(sol.Z.sum(axis=1) - np.array(margins.rows)).max() <= sol.residual
        assert np.abs(sol.Z.sum(axis=0) - np.array(margins.cols)).max() <= sol.residual
        assert sol.entropy == pytest.approx(sol.log_alpha, rel=1e-6)
        # zero iterations is legitimate: uniform margins are optimal at init
        assert sol.iterations >= 0

    def test_symmetry_law(self):
        m = Margins((2, 2, 2, 2), (3, 3, 2))
        sol = solve_maxent_01(m)
        expect = np.array(m.cols, dtype=float) / m.m
        assert np.abs(sol.Z - expect[None, :]).max() <= 1e-8

    def test_no_interior_full_row(self):
        with pytest.raises(NoInterior) as exc:
            solve_maxent_01(Margins((3, 1), (2, 1, 1)))
        partial = exc.value.partial
        assert partial is not None
        assert partial.Z.max() > 0.999

    def test_zero_margin_rejected(self):
        with pytest.raises(BadMargins):
            solve_maxent_01(Margins((2, 0), (1, 1)))

    def test_coarse_tolerance(self):
        m = Margins((2, 2, 1), (2, 2, 1))
        sol = solve_maxent_01(m, tol=1e-4)
        assert sol.residual <= 1e-4 * (1 + m.total)

    def test_masked_solution(self):
        m = Margins((1, 1, 1), (1, 1, 1))
        mask = CellMask.from_strings(["011", "101", "110"])
        sol = solve_maxent_01(m, mask=mask)
        assert sol.mask == mask
        assert sol.Z[0, 0] == 0.0 and sol.Z[1, 1] == 0.0 and sol.Z[2, 2] == 0.0
        assert np.abs(sol.Z.sum(axis=1) - 1.0).max() <= 1e-9
        # off-diagonal entries must be 1/2 by symmetry
        assert abs(sol.Z[0, 1] - 0.5) < 1e-9

    def test_mask_validated(self):
        m = Margins((1, 1), (1, 1))
        with pytest.raises(BadMargins):
            solve_maxent_01(m, mask=CellMask.from_strings(["00", "11"]))

    def test_round_trip_dict(self):
        sol = solve_maxent_01(Margins((2, 2, 1), (2, 2, 1)))
        blob = json.dumps(sol.to_dict())
        sol2 = MaxEntSolution.from_dict(json.loads(blob))
        assert sol2.mode == sol.mode
        assert np.array_equal(sol2.Z, sol.Z)
        assert sol2.entropy == sol.entropy
        assert sol2.log_alpha == sol.log_alpha


class TestSolveNonneg:
    @pytest.mark.parametrize("margins", INTERIOR_NN, ids=str)
    def test_certificates(self, margins):
        sol = solve_maxent_nonneg(margins)
        N = margins.total
        assert sol.mode == "nonneg"
        assert sol.residual <= 1e-10 * (1 + N)
        assert sol.Z.min() > 0.0
        assert np.abs(sol.Z.sum(axis=1) - np.array(margins.rows)).max() <= sol.residual
        assert sol.entropy == pytest.approx(sol.log_alpha, rel=1e-6)

    def test_single_cell(self):
        sol = solve_maxent_nonneg(Margins((1,), (1,)))
        assert sol.Z[0, 0] == pytest.approx(1.0, abs=1e-12)
        assert sol.entropy == pytest.approx(math.log(4), rel=1e-10)

    def test_symmetry_law(self):
        m = Margins((3, 3), (4, 2))
        sol = solve_maxent_nonneg(m)
        expect = np.array(m.cols, dtype=float) / m.m
        assert np.abs(sol.Z - expect[None, :]).max() <= 1e-8

    def test_zero_margin_rejected(self):
        with pytest.raises(BadMargins):
            solve_maxent_nonneg(Margins((2, 0), (1, 1)))

    def test_phase_transition_concentration(self):
        n = 30
        rows = (3 * n,) + (n,) * (n - 1)
        sol = solve_maxent_nonneg(Margins(rows, rows))
        others = sol.Z.copy()
        others[0, 0] = 0.0
        assert sol.Z[0, 0] > 0.58 * n
        assert others.max() < 10.0


class TestBounds01:
    def test_hand_checked_instance(self):
        m = Margins((1, 1), (1, 1))
        lo, hi = bounds_01(m)
        assert lo == pytest.approx(math.log(1.5), abs=1e-9)
        assert hi == pytest.approx(math.log(16.0), abs=1e-9)
        assert lo - 1e-9 <= math.log(count_01(m)) <= hi + 1e-9

    def test_sandwich_small_family(self):
        seen = set()
        for margins in balanced_pairs(3, 3, positive=True):
            key = canonical(margins)
            if key in seen:
                continue
            seen.add(key)
            c = count_01(margins)
            if c == 0:
                continue
            try:
                lo, hi = bounds_01(margins)
            except NoInterior:
                continue
            assert lo - 1e-9 <= math.log(c) <= hi + 1e-9, margins

    def test_offset_formula(self):
        m = Margins((2, 2, 1), (2, 2, 1))
        cells = m.m * m.n
        expect = math.lgamma(cells + 1) - cells * math.log(cells)
        for r in m.rows:
            k = m.n - r
            expect += k * math.log(k) - math.lgamma(k + 1) if k > 0 else 0.0
        for c in m.cols:
            expect += c * math.log(c) - math.lgamma(c + 1) if c > 0 else 0.0
        assert log_vdw_offset_01(m) == pytest.approx(expect, rel=1e-12)
        assert log_vdw_offset_01(m) <= 0.0

    def test_reuses_supplied_solution(self):
        m = Margins((2, 2, 1), (2, 2, 1))
        sol = solve_maxent_01(m)
        assert bounds_01(m, solution=sol) == bounds_01(m)


class TestBoundsNonneg:
    def test_correction_scale(self):
        m = Margins((3, 3), (4, 2))
        hi, corr = bounds_nonneg(m)
        assert corr == pytest.approx((m.m + m.n) * math.log(m.total), rel=1e-12)

    def test_upper_bound_small_family(self):
        seen = set()
        for margins in balanced_pairs(3, 4, positive=True):
            key = canonical(margins)
            if key in seen:
                continue
            seen.add(key)
            hi, _ = bounds_nonneg(margins)
            assert math.log(count_nonneg(margins)) <= hi + 1e-9, margins

    def test_single_cell_family(self):
        for k in range(1, 11):
            m = Margins((k,), (k,))
            hi, _ = bounds_nonneg(m)
            assert 0.0 <= hi + 1e-9  # ln 1 = 0 bounded by ln alpha


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_solver_invariants_random_01(data):
    m = data.draw(st.integers(2, 4))
    n = data.draw(st.integers(2, 4))
    rows = data.draw(st.lists(st.integers(1, n - 1), min_size=m, max_size=m))
    total = sum(rows)
    cols = []
    remaining = total
    for j in range(n - 1):
        upper = min(m - 1, remaining - (n - 1 - j))
        if upper < 1:
            return
        c = data.draw(st.integers(1, upper))
        cols.append(c)
        remaining -= c
    if not (1 <= remaining <= m - 1):
        return
    cols.append(remaining)
    margins = Margins(tuple(rows), tuple(cols))
    try:
        sol = solve_maxent_01(margins)
    except NoInterior:
        return
    assert sol.residual <= 1e-10 * (1 + margins.total)
    assert abs(sol.dual.s.sum()) < 1e-8
    assert sol.entropy == pytest.approx(sol.log_alpha, rel=1e-6, abs=1e-8)
