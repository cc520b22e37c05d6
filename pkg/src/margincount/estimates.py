"""Independence heuristics, correlation diagnostics, and concavity checks.

If the margins were "typical", counting would be easy: pretend the row
events and column events are independent.  For zero-one matrices the
heuristic count is

    I0(R, C) = C(mn, N)^(-1) * prod_i C(n, r_i) * prod_j C(m, c_j),

the number of ways to choose the rows and columns independently divided
by the chance a uniform N-subset of cells matches both.  For non-negative
integer matrices the same logic with multisets gives

    I+(R, C) = C(N+mn-1, mn-1)^(-1) * prod_i C(r_i+n-1, n-1)
                                     * prod_j C(c_j+m-1, m-1).

Neither is a theorem: zero-one margins repel (I0 overestimates |A0|) and
non-negative margins attract (I+ underestimates |A+|), with the gap
amplified by cloning the instance (see
:func:`margincount.margins.clone_margins`).  ``correlation_diagnostic``
measures the signed gap against the max-entropy value ln(alpha), whose
distance to the true log-count is polynomially bounded, and classifies it
against a polynomial slack budget.

The module also hosts the approximate log-concavity checker for weighted
margin triples and the domination (majorization) monotonicity check, both
of which compare exact DP counts by default.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

from .errors import LengthMismatch, DominationViolated, NonIntegerAverage, OutOfRange
from .exact import count_01, count_nonneg
from .margins import Margins, dominates
from .maxent import Mode, log_vdw_offset_01, solve_maxent_01, solve_maxent_nonneg
from .maxent import _log_pow_over_factorial

__all__ = [
    "independence_estimate_01",
    "independence_estimate_nonneg",
    "CorrelationReport",
    "correlation_diagnostic",
    "ConcavityReport",
    "log_concavity_check",
    "domination_monotonicity_check",
]


def _log_binom(a: int, b: int) -> float:
    return math.lgamma(a + 1) - math.lgamma(b + 1) - math.lgamma(a - b + 1)


def independence_estimate_01(margins: Margins) -> float:
    """ln I0(R, C), the independence heuristic for zero-one matrices.

    Requires r_i <= n, c_j <= m and N <= mn (otherwise a binomial
    coefficient degenerates and OutOfRange is raised).
    """
    m, n, N = margins.m, margins.n, margins.total
    if N > m * n or any(r > n for r in margins.rows) or any(c > m for c in margins.cols):
        raise OutOfRange("independence heuristic needs r_i <= n, c_j <= m, N <= mn")
    out = -_log_binom(m * n, N)
    for r in margins.rows:
        out += _log_binom(n, r)
    for c in margins.cols:
        out += _log_binom(m, c)
    return out


def independence_estimate_nonneg(margins: Margins) -> float:
    """ln I+(R, C), the independence heuristic for non-negative matrices."""
    m, n, N = margins.m, margins.n, margins.total
    out = -_log_binom(N + m * n - 1, m * n - 1)
    for r in margins.rows:
        out += _log_binom(r + n - 1, n - 1)
    for c in margins.cols:
        out += _log_binom(c + m - 1, m - 1)
    return out


@dataclass(frozen=True)
class CorrelationReport:
    """Signed gap between the independence heuristic and ln(alpha).

    ``gap`` = log_independence - log_alpha.  ``direction`` is "repel" when
    the gap exceeds the slack budget (margins crowd each other out more
    than independence admits), "attract" when it is below minus the
    budget, "near-neutral" otherwise.  The budget scales like the
    polynomial factor separating ln(alpha) from the true log-count, so
    only gaps beyond that factor are attributed to correlation.
    """

    mode: Mode
    log_alpha: float
    log_independence: float
    gap: float
    direction: str
    slack_budget: float

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "log_alpha": self.log_alpha,
            "log_independence": self.log_independence,
            "gap": self.gap,
            "direction": self.direction,
            "slack_budget": self.slack_budget,
        }


def correlation_diagnostic(
    margins: Margins, mode: Mode, slack_factor: float = 2.0
) -> CorrelationReport:
    """Compare the independence heuristic against the max-entropy value.

    The slack budget is slack_factor * (m + n) * ln(mn) in zero-one mode
    and slack_factor * (m + n) * ln N in nonneg mode.  The default factor
    2 is a pragmatic choice (the theory fixes only the shape of the
    polynomial factor, not its constant); desk-scale instances rarely
    clear it, so lower it deliberately when hunting for direction calls.
    """
    m, n, N = margins.m, margins.n, margins.total
    if mode == "zero-one":
        log_alpha = solve_maxent_01(margins).log_alpha
        log_ind = independence_estimate_01(margins)
        slack = slack_factor * (m + n) * math.log(m * n)
    elif mode == "nonneg":
        log_alpha = solve_maxent_nonneg(margins).log_alpha
        log_ind = independence_estimate_nonneg(margins)
        slack = slack_factor * (m + n) * math.log(N)
    else:
        raise OutOfRange(f"unknown mode {mode!r}")
    gap = log_ind - log_alpha
    if gap > slack:
        direction = "repel"
    elif gap < -slack:
        direction = "attract"
    else:
        direction = "near-neutral"
    return CorrelationReport(mode, log_alpha, log_ind, gap, direction, slack)


@dataclass(frozen=True)
class ConcavityReport:
    """Outcome of a weighted log-concavity comparison.

    ``lhs_log`` is ln of the count at the averaged margins, ``rhs_log``
    the weighted average of the item log-counts (-inf for empty zero-one
    classes).  ``holds_conjectured`` tests the bare inequality
    lhs >= rhs; ``holds_precise`` adds the explicit slack factor that is
    actually proven.  ``exact`` records whether counts were exact DP
    values or max-entropy surrogates.
    """

    lhs_log: float
    rhs_log: float
    precise_slack_log: float
    holds_conjectured: bool
    holds_precise: bool
    exact: bool

    def to_dict(self) -> dict:
        return {
            "lhs_log": self.lhs_log,
            "rhs_log": self.rhs_log,
            "precise_slack_log": self.precise_slack_log,
            "holds_conjectured": self.holds_conjectured,
            "holds_precise": self.holds_precise,
            "exact": self.exact,
        }


def _log_count(margins: Margins, mode: Mode) -> float:
    if mode == "zero-one":
        c = count_01(margins)
    else:
        c = count_nonneg(margins)
    if c == 0:
        return float("-inf")
    # counts can exceed float range in principle; go through int log
    return _log_int(c)


def _log_int(c: int) -> float:
    if c < 2**53:
        return math.log(c)
    bits = c.bit_length() - 53
    return math.log(c >> bits) + bits * math.log(2)


def log_concavity_check(
    items: Sequence[tuple[Margins, float]],
    mode: Mode,
    use_exact: bool = True,
) -> ConcavityReport:
    """Test approximate log-concavity of the count on a weighted triple.

    Given items (R_k, C_k) with weights beta_k >= 0 summing to one, and
    the averaged margins (R, C) = (sum beta_k R_k, sum beta_k C_k) which
    must be integer vectors, compares

        ln count(R, C)  against  sum_k beta_k ln count(R_k, C_k).

    ``holds_conjectured`` is the bare comparison (open in general);
    ``holds_precise`` allows the proven slack: for zero-one the factor
    ln((mn)^mn / (mn)!) + sum_i ln((n-r_i)!/(n-r_i)^(n-r_i))
    + sum_j ln(c_j!/c_j^c_j) at the averaged margins, for nonneg the
    factor ln(N^N / N!) + min over the two margin product terms.  The
    nonneg slack is proven only when all items share the same total N;
    with unequal totals ``holds_precise`` is still reported but is not
    backed by a theorem.  Comparisons carry a 1e-9 additive tolerance.

    With use_exact=False the counts are replaced by ln(alpha) from the
    max-entropy solver (cheap but heuristic); the report's ``exact`` flag
    records which variant ran.
    """
    if not items:
        raise LengthMismatch("need at least one weighted margin pair")
    m, n = items[0][0].m, items[0][0].n
    betas = []
    for mg, beta in items:
        if mg.m != m or mg.n != n:
            raise LengthMismatch("all items must share the same shape (m, n)")
        if beta < 0:
            raise OutOfRange(f"negative weight {beta}")
        betas.append(float(beta))
    if abs(sum(betas) - 1.0) > 1e-12:
        raise OutOfRange(f"weights must sum to one, got {sum(betas)!r}")

    avg_rows = [sum(b * mg.rows[i] for (mg, _), b in zip(items, betas)) for i in range(m)]
    avg_cols = [sum(b * mg.cols[j] for (mg, _), b in zip(items, betas)) for j in range(n)]
    for v in (*avg_rows, *avg_cols):
        if abs(v - round(v)) > 1e-9:
            raise NonIntegerAverage(f"averaged margin entry {v} is not an integer")
    avg = Margins(
        tuple(int(round(v)) for v in avg_rows), tuple(int(round(v)) for v in avg_cols)
    )

    if use_exact:
        lhs = _log_count(avg, mode)
        rhs = sum(
            b * _log_count(mg, mode) for (mg, _), b in zip(items, betas) if b > 0.0
        )
    else:
        solve = solve_maxent_01 if mode == "zero-one" else solve_maxent_nonneg
        lhs = solve(avg).log_alpha
        rhs = sum(b * solve(mg).log_alpha for (mg, _), b in zip(items, betas) if b > 0.0)

    if mode == "zero-one":
        slack = -log_vdw_offset_01(avg)
    else:
        N = avg.total
        row_term = sum(_log_pow_over_factorial(r) for r in avg.rows)
        col_term = sum(_log_pow_over_factorial(c) for c in avg.cols)
        slack = _log_pow_over_factorial(N) - max(row_term, col_term)

    return ConcavityReport(
        lhs_log=lhs,
        rhs_log=rhs,
        precise_slack_log=slack,
        holds_conjectured=bool(lhs >= rhs - 1e-9),
        holds_precise=bool(lhs + slack >= rhs - 1e-9),
        exact=use_exact,
    )


def domination_monotonicity_check(base: Margins, stronger: Margins, mode: Mode) -> bool:
    """Check count(base) >= count(stronger) when `stronger` majorizes `base`.

    Spreading the same totals more unevenly (in the domination order on
    both the row and the column vector) can only shrink the matrix class.
    Raises DominationViolated unless stronger.rows dominates base.rows and
    stronger.cols dominates base.cols.  Counts are exact.
    """
    if not dominates(stronger.rows, base.rows):
        raise DominationViolated("row margins of `stronger` do not dominate `base`")
    if not dominates(stronger.cols, base.cols):
        raise DominationViolated("column margins of `stronger` do not dominate `base`")
    if mode == "zero-one":
        return count_01(base) >= count_01(stronger)
    if mode == "nonneg":
        return count_nonneg(base) >= count_nonneg(stronger)
    raise OutOfRange(f"unknown mode {mode!r}")
