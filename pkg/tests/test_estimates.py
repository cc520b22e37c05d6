import math

import numpy as np
import pytest

from margincount import (
    DominationViolated,
    LengthMismatch,
    Margins,
    NonIntegerAverage,
    OutOfRange,
    clone_margins,
    correlation_diagnostic,
    count_01,
    count_nonneg,
    domination_monotonicity_check,
    independence_estimate_01,
    independence_estimate_nonneg,
    log_concavity_check,
    log_vdw_offset_01,
    solve_maxent_01,
)


def _direct_ind_01(margins: Margins) -> float:
    m, n, N = margins.m, margins.n, margins.total
    out = -math.log(math.comb(m * n, N))
    for r in margins.rows:
        out += math.log(math.comb(n, r))
    for c in margins.cols:
        out += math.log(math.comb(m, c))
    return out


def _direct_ind_nn(margins: Margins) -> float:
    m, n, N = margins.m, margins.n, margins.total
    out = -math.log(math.comb(N + m * n - 1, m * n - 1))
    for r in margins.rows:
        out += math.log(math.comb(r + n - 1, n - 1))
    for c in margins.cols:
        out += math.log(math.comb(c + m - 1, m - 1))
    return out


class TestIndependence01:
    def test_matches_direct_formula(self):
        for rows, cols in [
            ((2, 2, 1), (2, 2, 1)),
            ((1, 1), (1, 1)),
            ((3, 2, 2, 1), (2, 2, 2, 2)),
        ]:
            m = Margins(rows, cols)
            assert independence_estimate_01(m) == pytest.approx(
                _direct_ind_01(m), rel=1e-12
            )

    def test_out_of_range(self):
        with pytest.raises(OutOfRange):
            independence_estimate_01(Margins((4,), (2, 1, 1)))
        with pytest.raises(OutOfRange):
            independence_estimate_01(Margins((1, 2), (3,)))

    def test_exact_on_trivial_instance(self):
        # a single full row: one matrix, and the heuristic happens to be
        # exact because the binomials cancel
        m = Margins((2,), (1, 1))
        assert independence_estimate_01(m) == pytest.approx(0.0, abs=1e-12)


class TestIndependenceNonneg:
    def test_matches_direct_formula(self):
        for rows, cols in [
            ((1, 1), (1, 1)),
            ((3, 3), (4, 2)),
            ((2, 2, 1), (2, 2, 1)),
        ]:
            m = Margins(rows, cols)
            assert independence_estimate_nonneg(m) == pytest.approx(
                _direct_ind_nn(m), rel=1e-12
            )

    def test_single_cell_exact(self):
        m = Margins((5,), (5,))
        assert independence_estimate_nonneg(m) == pytest.approx(0.0, abs=1e-12)


class TestCorrelationDiagnostic:
    def test_report_wiring(self):
        m = Margins((2, 2, 1), (2, 2, 1))
        rep = correlation_diagnostic(m, "zero-one")
        assert rep.mode == "zero-one"
        assert rep.gap == pytest.approx(
            rep.log_independence - rep.log_alpha, rel=1e-12
        )
        assert rep.slack_budget == pytest.approx(
            2.0 * (m.m + m.n) * math.log(m.m * m.n), rel=1e-12
        )
        assert rep.direction == "near-neutral"

    def test_zero_slack_forces_direction(self):
        m = Margins((2, 2, 1), (2, 2, 1))
        rep = correlation_diagnostic(m, "zero-one", slack_factor=0.0)
        assert rep.direction in ("repel", "attract")
        assert (rep.direction == "repel") == (rep.gap > 0)

    def test_nonneg_slack_scale(self):
        m = Margins((3, 3), (4, 2))
        rep = correlation_diagnostic(m, "nonneg", slack_factor=1.0)
        assert rep.slack_budget == pytest.approx(
            (m.m + m.n) * math.log(m.total), rel=1e-12
        )

    def test_unknown_mode(self):
        with pytest.raises(OutOfRange):
            correlation_diagnostic(Margins((1,), (1,)), "ternary")


class TestRepelAttractAgainstExactCounts:
    """The heuristics sit on opposite sides of the truth on the k=2 clone.

    Only the direction at k=2 is asserted: the super-exponential growth of
    the gaps is an asymptotic statement, and at this desk-scale base the
    zero-one gap is in fact non-monotone in k (it even changes sign at
    k=3), so growth claims would be dishonest here.
    """

    def test_zero_one_overestimates_at_k2(self):
        mk = clone_margins(Margins((2, 2, 1), (2, 2, 1)), 2)
        gap = independence_estimate_01(mk) - math.log(count_01(mk))
        assert gap > 0  # repels: I0 above the truth

    def test_nonneg_underestimates_at_k2(self):
        base = Margins((2, 2, 1), (2, 2, 1))
        gaps = []
        for k in (1, 2):
            mk = clone_margins(base, k)
            gap = math.log(count_nonneg(mk)) - independence_estimate_nonneg(mk)
            gaps.append(gap)
        assert gaps[1] > 0  # attracts: I+ below the truth
        assert gaps[1] > gaps[0]  # and here the gap does grow from k=1


class TestLogConcavity:
    def test_identical_items_are_tight(self):
        m = Margins((2, 2, 1), (2, 2, 1))
        rep = log_concavity_check([(m, 0.5), (m, 0.5)], "zero-one")
        assert rep.lhs_log == pytest.approx(rep.rhs_log, abs=1e-12)
        assert rep.holds_conjectured and rep.holds_precise
        assert rep.exact

    def test_zero_one_precise_slack_is_vdw_offset(self):
        a = Margins((2, 1), (2, 1))
        b = Margins((2, 3), (2, 3))
        rep = log_concavity_check([(a, 0.5), (b, 0.5)], "zero-one")
        avg = Margins((2, 2), (2, 2))
        assert rep.precise_slack_log == pytest.approx(
            -log_vdw_offset_01(avg), rel=1e-12
        )

    def test_nonneg_precise_slack_formula(self):
        a = Margins((2, 1), (2, 1))
        b = Margins((2, 3), (2, 3))
        rep = log_concavity_check([(a, 0.5), (b, 0.5)], "nonneg")

        def lp(k):
            return k * math.log(k) - math.lgamma(k + 1) if k > 0 else 0.0

        avg = Margins((2, 2), (2, 2))
        expect = lp(avg.total) - max(
            sum(lp(r) for r in avg.rows), sum(lp(c) for c in avg.cols)
        )
        assert rep.precise_slack_log == pytest.approx(expect, rel=1e-12)

    def test_shape_mismatch(self):
        with pytest.raises(LengthMismatch):
            log_concavity_check(
                [(Margins((1,), (1,)), 0.5), (Margins((1, 1), (2,)), 0.5)],
                "zero-one",
            )

    def test_weights_must_sum_to_one(self):
        m = Margins((1,), (1,))
        with pytest.raises(OutOfRange):
            log_concavity_check([(m, 0.4), (m, 0.4)], "zero-one")

    def test_negative_weight(self):
        m = Margins((1,), (1,))
        with pytest.raises(OutOfRange):
            log_concavity_check([(m, 1.5), (m, -0.5)], "zero-one")

    def test_non_integer_average(self):
        a = Margins((1, 0), (1, 0))
        b = Margins((2, 0), (2, 0))
        with pytest.raises(NonIntegerAverage):
            log_concavity_check([(a, 0.5), (b, 0.5)], "nonneg")

    def test_empty_items(self):
        with pytest.raises(LengthMismatch):
            log_concavity_check([], "zero-one")

    def test_surrogate_path(self):
        # items must be interior-feasible in zero-one mode for the
        # max-entropy surrogate to exist
        a = Margins((3, 1), (1, 1, 1, 1))
        b = Margins((1, 3), (1, 1, 1, 1))
        rep = log_concavity_check([(a, 0.5), (b, 0.5)], "zero-one", use_exact=False)
        assert not rep.exact
        sol = solve_maxent_01(Margins((2, 2), (1, 1, 1, 1)))
        assert rep.lhs_log == pytest.approx(sol.log_alpha, rel=1e-9)

    def test_random_equal_total_triples_hold_precisely(self):
        rng = np.random.default_rng(5)
        trials = 0
        while trials < 12:
            m, n = 2, 3
            base_rows = rng.integers(1, 4, size=m)
            base_cols = _random_cols(rng, int(base_rows.sum()), n, cap=6)
            if base_cols is None:
                continue
            # perturbations with zero row/column total keep every item at
            # the same N, the regime where the precise bound is a theorem
            d_rows = np.array([1, -1])
            d_cols = np.array([1, -1, 0])
            rows_a = base_rows + d_rows
            rows_b = base_rows - d_rows
            cols_a = base_cols + d_cols
            cols_b = base_cols - d_cols
            if min(rows_a.min(), rows_b.min(), cols_a.min(), cols_b.min()) < 0:
                continue
            items = [
                (Margins(tuple(rows_a), tuple(cols_a)), 0.5),
                (Margins(tuple(rows_b), tuple(cols_b)), 0.5),
            ]
            rep = log_concavity_check(items, "nonneg")
            assert rep.holds_precise, items
            trials += 1


def _random_cols(rng, total, n, cap):
    cols = []
    remaining = total
    for j in range(n - 1):
        hi = min(cap, remaining)
        c = int(rng.integers(0, hi + 1))
        cols.append(c)
        remaining -= c
    if remaining > cap:
        return None
    cols.append(remaining)
    return np.array(cols)


class TestDominationMonotonicity:
    def test_known_pair(self):
        base = Margins((2, 2, 1), (2, 2, 1))
        stronger = Margins((3, 2, 0), (3, 2, 0))
        assert domination_monotonicity_check(base, stronger, "zero-one")
        assert domination_monotonicity_check(base, stronger, "nonneg")

    def test_equal_margins(self):
        m = Margins((2, 1), (2, 1))
        assert domination_monotonicity_check(m, m, "zero-one")

    def test_violation_raises(self):
        base = Margins((3, 2, 0), (3, 2, 0))
        stronger = Margins((2, 2, 1), (2, 2, 1))
        with pytest.raises(DominationViolated):
            domination_monotonicity_check(base, stronger, "zero-one")

    def test_random_transfer_pairs(self):
        rng = np.random.default_rng(17)
        done = 0
        while done < 10:
            m, n = int(rng.integers(2, 4)), int(rng.integers(2, 4))
            rows = rng.integers(0, 4, size=m)
            cols = _random_cols(rng, int(rows.sum()), n, cap=5)
            if cols is None:
                continue
            base = Margins(tuple(int(r) for r in rows), tuple(int(c) for c in cols))
            stronger = Margins(
                _transfer(rng, base.rows), _transfer(rng, base.cols)
            )
            mode = "zero-one" if rng.random() < 0.5 else "nonneg"
            assert domination_monotonicity_check(base, stronger, mode), (
                base,
                stronger,
                mode,
            )
            done += 1


def _transfer(rng, vec):
    """One rich-get-richer unit transfer, ascending the domination order."""
    v = list(vec)
    pairs = [
        (i, j)
        for i in range(len(v))
        for j in range(len(v))
        if i != j and v[j] > 0 and v[i] >= v[j]
    ]
    if not pairs:
        return tuple(v)
    i, j = pairs[int(rng.integers(0, len(pairs)))]
    v[i] += 1
    v[j] -= 1
    return tuple(v)
