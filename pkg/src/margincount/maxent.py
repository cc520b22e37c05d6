"""Maximum entropy matrices and convex dual bounds for margin counts.

For margins (R, C) with total N, consider matrices X of independent entries
that match the margins in expectation and maximize total entropy:

* zero-one mode: entries are Bernoulli, cell (i, j) has success probability
  z_ij in (0, 1), and the entropy of a cell is
  h(z) = z ln(1/z) + (1 - z) ln(1/(1 - z));
* non-negative mode: entries are geometric with mean z_ij > 0 and cell
  entropy g(z) = (z + 1) ln(z + 1) - z ln z.

The optimal Z solves a smooth convex dual problem in variables
(s_1..s_m, t_1..t_n):

    G0(s, t) = -sum_i r_i s_i - sum_j c_j t_j + sum_ij ln(1 + e^(s_i + t_j))
    G+(s, t) =  sum_i r_i s_i + sum_j c_j t_j - sum_ij ln(1 - e^(-s_i - t_j))

with z_ij = e^u / (1 + e^u) resp. e^(-u) / (1 - e^(-u)) at u = s_i + t_j,
and G+ restricted to s_i + t_j > 0.  Both objectives are invariant under
the gauge s -> s + d, t -> t - d; the solvers fix sum(s) = 0.

The minimum value ln(alpha) equals the entropy of the optimal Z and is an
upper bound on ln |A0(R, C)| resp. ln |A+(R, C)|; explicit multiplicative
corrections turn it into a matching lower bound (``bounds_01``) or into a
polynomial-gap statement whose constant is left to the caller
(``bounds_nonneg``).  A converged zero-one dual also certifies itself: it
scales the counting block matrix to a doubly stochastic one, see
:func:`margincount.exact.scale_block_matrix`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy.special import expit, xlogy

from .errors import (
    BadMargins,
    DomainViolation,
    LengthMismatch,
    NoInterior,
    NotConverged,
    OutOfRange,
)
from .margins import CellMask, Margins

__all__ = [
    "Mode",
    "DualPoint",
    "MaxEntSolution",
    "entropy_h",
    "entropy_g",
    "objective_G",
    "solve_maxent_01",
    "solve_maxent_nonneg",
    "bounds_01",
    "bounds_nonneg",
]

Mode = Literal["zero-one", "nonneg"]
MODES = ("zero-one", "nonneg")

ARMIJO = 1e-4  # sufficient-decrease constant of the backtracking line search


@dataclass(frozen=True)
class DualPoint:
    """Dual variables (s, t) of a margin-matching program.

    ``gauge`` records the normalization convention; solver output always
    uses "sum(s)=0".  The objective only depends on the sums s_i + t_j.
    """

    s: np.ndarray
    t: np.ndarray
    gauge: str = "sum(s)=0"

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float)
        t = np.asarray(self.t, dtype=float)
        if s.ndim != 1 or t.ndim != 1:
            raise LengthMismatch("dual vectors must be one-dimensional")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "t", t)


@dataclass(frozen=True)
class MaxEntSolution:
    """Converged output of a max-entropy solve.

    ``entropy`` is the total cell entropy of Z and ``log_alpha`` the dual
    objective value at the returned point; at the optimum the two coincide
    (they are reported separately because each is the natural certificate
    for a different inequality, and they agree only to solver tolerance).
    ``residual`` is the maximum absolute margin violation of Z.
    """

    mode: Mode
    Z: np.ndarray
    dual: DualPoint
    entropy: float
    log_alpha: float
    residual: float
    iterations: int
    mask: CellMask | None = field(default=None, compare=False)

    def to_dict(self) -> dict:
        d = {
            "mode": self.mode,
            "Z": [[float(v) for v in row] for row in self.Z],
            "dual": {
                "s": [float(v) for v in self.dual.s],
                "t": [float(v) for v in self.dual.t],
                "gauge": self.dual.gauge,
            },
            "entropy": self.entropy,
            "log_alpha": self.log_alpha,
            "residual": self.residual,
            "iterations": self.iterations,
        }
        if self.mask is not None:
            d["mask"] = self.mask.to_strings()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "MaxEntSolution":
        mask = CellMask.from_strings(d["mask"]) if "mask" in d else None
        return cls(
            mode=d["mode"],
            Z=np.asarray(d["Z"], dtype=float),
            dual=DualPoint(
                np.asarray(d["dual"]["s"], dtype=float),
                np.asarray(d["dual"]["t"], dtype=float),
                d["dual"].get("gauge", "sum(s)=0"),
            ),
            entropy=float(d["entropy"]),
            log_alpha=float(d["log_alpha"]),
            residual=float(d["residual"]),
            iterations=int(d["iterations"]),
            mask=mask,
        )


# ---------------------------------------------------------------------------
# entropies

def entropy_h(Z) -> float:
    """Total Bernoulli entropy sum_ij [z ln(1/z) + (1-z) ln(1/(1-z))].

    Accepts 0 and 1 entries (their contribution is zero); raises
    OutOfRange outside [0, 1].
    """
    z = np.asarray(Z, dtype=float)
    if np.any(z < 0.0) or np.any(z > 1.0):
        raise OutOfRange("zero-one entropy needs entries in [0, 1]")
    return float(-(xlogy(z, z).sum() + xlogy(1.0 - z, 1.0 - z).sum()))


def entropy_g(Z) -> float:
    """Total geometric entropy sum_ij [(z+1) ln(z+1) - z ln z], z >= 0."""
    z = np.asarray(Z, dtype=float)
    if np.any(z < 0.0):
        raise OutOfRange("non-negative entropy needs entries >= 0")
    return float(xlogy(z + 1.0, z + 1.0).sum() - xlogy(z, z).sum())


# ---------------------------------------------------------------------------
# the dual objective

def _mask_grid(margins: Margins, mask: CellMask | None) -> np.ndarray:
    if mask is None:
        return np.ones((margins.m, margins.n), dtype=bool)
    mask.validate_against(margins)
    return mask.grid


def _z_from_dual(mode: Mode, u: np.ndarray) -> np.ndarray:
    if mode == "zero-one":
        return expit(u)
    return 1.0 / np.expm1(u)


def objective_G(
    mode: Mode, margins: Margins, dual: DualPoint, mask: CellMask | None = None
) -> tuple[float, np.ndarray]:
    """Value and gradient of the dual objective at (s, t).

    Returns ``(value, grad)`` with ``grad`` the length-(m+n) concatenation
    of the s- and t-partials.  In both modes the gradient components are
    exactly the signed margin violations of Z(s, t), so the gradient norm
    doubles as the primal feasibility residual.

    Raises DomainViolation in nonneg mode when some permitted cell has
    s_i + t_j <= 0.
    """
    if mode not in MODES:
        raise OutOfRange(f"unknown mode {mode!r}")
    grid = _mask_grid(margins, mask)
    s, t = dual.s, dual.t
    if s.shape != (margins.m,) or t.shape != (margins.n,):
        raise LengthMismatch("dual point shape does not match the margins")
    u = s[:, None] + t[None, :]
    R = np.asarray(margins.rows, dtype=float)
    C = np.asarray(margins.cols, dtype=float)
    if mode == "zero-one":
        value = -R @ s - C @ t + np.logaddexp(0.0, u)[grid].sum()
        z = np.where(grid, expit(u), 0.0)
        gs = z.sum(axis=1) - R
        gt = z.sum(axis=0) - C
    else:
        if np.any(u[grid] <= 0.0):
            raise DomainViolation("nonneg dual needs s_i + t_j > 0 on permitted cells")
        value = R @ s + C @ t - np.log(-np.expm1(-u[grid])).sum()
        z = np.where(grid, 1.0 / np.expm1(np.where(grid, u, 1.0)), 0.0)
        gs = R - z.sum(axis=1)
        gt = C - z.sum(axis=0)
    return float(value), np.concatenate([gs, gt])


def _hessian(mode: Mode, z: np.ndarray) -> np.ndarray:
    """Hessian of G at the current point: weights w on the bipartite graph.

    w_ij = z(1-z) in zero-one mode, z(1+z) in nonneg mode (zero on masked
    cells since z is zero there in zero-one mode; nonneg masked cells must
    be zeroed by the caller).
    """
    w = z * (1.0 - z) if mode == "zero-one" else z * (1.0 + z)
    m, n = w.shape
    H = np.zeros((m + n, m + n))
    H[:m, :m] = np.diag(w.sum(axis=1))
    H[m:, m:] = np.diag(w.sum(axis=0))
    H[:m, m:] = w
    H[m:, :m] = w.T
    return H


def _regauge(s: np.ndarray, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    shift = s.mean()
    return s - shift, t + shift


def _solve(
    mode: Mode,
    margins: Margins,
    mask: CellMask | None,
    tol: float,
    max_iter: int,
    divergence: float,
) -> MaxEntSolution:
    """Damped Newton descent shared by both modes."""
    m, n = margins.m, margins.n
    if any(r <= 0 for r in margins.rows) or any(c <= 0 for c in margins.cols):
        raise BadMargins("max-entropy programs require strictly positive margins")
    grid = _mask_grid(margins, mask)
    N = margins.total

    if mode == "zero-one":
        s = np.zeros(m)
        t = np.zeros(n)
    else:
        # start at the flat matrix z = N / (open cell count)
        cells = int(grid.sum())
        u0 = math.log((cells + N) / N)
        s = np.full(m, 0.5 * u0)
        t = np.full(n, 0.5 * u0)

    def masked_z(u: np.ndarray) -> np.ndarray:
        if mode == "zero-one":
            return np.where(grid, expit(u), 0.0)
        return np.where(grid, 1.0 / np.expm1(np.where(grid, u, 1.0)), 0.0)

    def in_domain(s_: np.ndarray, t_: np.ndarray) -> bool:
        if mode == "zero-one":
            return True
        u = s_[:, None] + t_[None, :]
        return bool(np.all(u[grid] > 0.0))

    gtol = tol * (1.0 + N)
    value, grad = objective_G(mode, margins, DualPoint(s, t), mask)
    iterations = 0
    v = np.concatenate([np.ones(m), -np.ones(n)]) / math.sqrt(m + n)

    while np.abs(grad).max() > gtol:
        if iterations >= max_iter:
            raise NotConverged(
                f"no convergence within {max_iter} Newton iterations "
                f"(gradient norm {np.abs(grad).max():.3e}, tol {gtol:.3e})"
            )
        if max(np.abs(s).max(), np.abs(t).max()) > divergence:
            partial = _package(mode, margins, mask, s, t, grad, iterations)
            raise NoInterior(
                f"dual norm exceeded {divergence}: the polytope of "
                "fractional matrices with these margins has empty interior",
                partial=partial,
            )
        u = s[:, None] + t[None, :]
        z = masked_z(u)
        H = _hessian(mode, z)
        # the gauge direction v spans the analytic kernel of H; a rank-one
        # shift makes the system solvable without touching the step on v-perp
        sigma = max(np.trace(H) / (m + n), 1e-12)
        try:
            step = np.linalg.solve(H + sigma * np.outer(v, v), -grad)
            if not np.all(np.isfinite(step)):
                raise np.linalg.LinAlgError
        except np.linalg.LinAlgError:
            # disconnected or degenerate instances: fall back to descent
            step = -grad / max(1.0, np.abs(grad).max())
        slope = grad @ step
        if slope > 0.0:  # not a descent direction, fall back
            step = -grad / max(1.0, np.abs(grad).max())
            slope = grad @ step
        # once the Armijo decrease falls below the float resolution of the
        # objective the value test turns into coin flipping; near the
        # optimum accept on gradient contraction instead (plain Newton)
        resolution = 4.0 * np.finfo(float).eps * (1.0 + abs(value))
        lam = 1.0
        while lam > 1e-14:
            s2 = s + lam * step[:m]
            t2 = t + lam * step[m:]
            if in_domain(s2, t2):
                value2, grad2 = objective_G(mode, margins, DualPoint(s2, t2), mask)
                if value2 <= value + ARMIJO * lam * slope:
                    break
                if (
                    abs(ARMIJO * lam * slope) < resolution
                    and np.abs(grad2).max() <= 0.9 * np.abs(grad).max()
                ):
                    break
            lam *= 0.5
        else:
            raise NotConverged("line search stalled before reaching tolerance")
        s, t = _regauge(s2, t2)
        value, grad = objective_G(mode, margins, DualPoint(s, t), mask)
        iterations += 1

    return _package(mode, margins, mask, s, t, grad, iterations)


def _package(
    mode: Mode,
    margins: Margins,
    mask: CellMask | None,
    s: np.ndarray,
    t: np.ndarray,
    grad: np.ndarray,
    iterations: int,
) -> MaxEntSolution:
    grid = _mask_grid(margins, mask)
    u = s[:, None] + t[None, :]
    if mode == "zero-one":
        z = np.where(grid, expit(u), 0.0)
        entropy = entropy_h(z)
    else:
        z = np.where(grid, 1.0 / np.expm1(np.where(grid, u, 1.0)), 0.0)
        entropy = entropy_g(z)
    value, _ = objective_G(mode, margins, DualPoint(s, t), mask)
    return MaxEntSolution(
        mode=mode,
        Z=z,
        dual=DualPoint(s, t),
        entropy=entropy,
        log_alpha=value,
        residual=float(np.abs(grad).max()),
        iterations=iterations,
        mask=mask,
    )


def solve_maxent_01(
    margins: Margins,
    mask: CellMask | None = None,
    tol: float = 1e-10,
    max_iter: int = 200,
    divergence: float = 40.0,
) -> MaxEntSolution:
    """Maximize total Bernoulli entropy subject to the margins.

    Damped Newton descent on G0 from s = t = 0, with Armijo backtracking
    (halving, constant 1e-4) and the gauge sum(s) = 0 restored after every
    step.  Converged when the margin residual (= gradient infinity norm)
    is at most tol * (1 + N).

    Margins must be strictly positive; rows or columns that are forced
    full (r_i = n) or any other empty-interior situation surfaces as a
    NoInterior error once the dual iterates pass the divergence threshold.
    The exception carries the near-optimal state in ``partial``: the
    objective value there is still a valid upper bound on ln |A0|.

    Raises
    ------
    BadMargins, NoInterior, NotConverged
    """
    return _solve("zero-one", margins, mask, tol, max_iter, divergence)


def solve_maxent_nonneg(
    margins: Margins,
    mask: CellMask | None = None,
    tol: float = 1e-10,
    max_iter: int = 200,
    divergence: float = 40.0,
) -> MaxEntSolution:
    """Maximize total geometric entropy subject to the margins.

    Same Newton scheme as :func:`solve_maxent_01` on G+, started at the
    flat matrix z = N / (mn) and with the line search additionally
    confined to the domain s_i + t_j > 0.  For strictly positive margins
    the minimum is always attained, so NoInterior signals only pathological
    masked instances.
    """
    return _solve("nonneg", margins, mask, tol, max_iter, divergence)


# ---------------------------------------------------------------------------
# bounds

def _log_pow_over_factorial(k: int) -> float:
    """ln(k^k / k!), with the empty-product convention 0^0 = 0! = 1."""
    if k == 0:
        return 0.0
    return k * math.log(k) - math.lgamma(k + 1)


def log_vdw_offset_01(margins: Margins) -> float:
    """ln of the explicit factor between alpha0 and its lower bound on |A0|.

    The factor is (mn)! / (mn)^(mn) * prod_i (n-r_i)^(n-r_i) / (n-r_i)!
    * prod_j c_j^(c_j) / c_j!, always in (0, 1]; it is the van der Waerden
    style loss of the permanent bound on the counting block matrix.
    """
    m, n = margins.m, margins.n
    out = -_log_pow_over_factorial(m * n)
    for r in margins.rows:
        out += _log_pow_over_factorial(n - r)
    for c in margins.cols:
        out += _log_pow_over_factorial(c)
    return out


def bounds_01(
    margins: Margins, solution: MaxEntSolution | None = None
) -> tuple[float, float]:
    """Two-sided bounds on ln |A0(R, C)| from the max-entropy program.

    Returns ``(log_lower, log_upper)`` with log_upper = ln(alpha0), the
    dual objective value, and log_lower = log_upper plus the explicit
    factor of :func:`log_vdw_offset_01`.  The sandwich

        log_lower <= ln |A0(R, C)| <= log_upper

    holds unconditionally for interior instances.
    """
    if solution is None:
        solution = solve_maxent_01(margins)
    if solution.mode != "zero-one":
        raise OutOfRange("bounds_01 needs a zero-one solution")
    upper = solution.log_alpha
    return upper + log_vdw_offset_01(margins), upper


def bounds_nonneg(
    margins: Margins, solution: MaxEntSolution | None = None
) -> tuple[float, float]:
    """Upper bound on ln |A+(R, C)| plus the polynomial correction scale.

    Returns ``(log_upper, correction)`` with log_upper = ln(alpha+) and
    correction = (m + n) * ln N.  The matching lower bound has the shape
    log_upper - gamma * correction for an absolute constant gamma that the
    theory does not pin down; the pieces are returned separately so the
    caller chooses gamma explicitly rather than trusting a hidden value.
    """
    if solution is None:
        solution = solve_maxent_nonneg(margins)
    if solution.mode != "nonneg":
        raise OutOfRange("bounds_nonneg needs a nonneg solution")
    N = margins.total
    return solution.log_alpha, (margins.m + margins.n) * math.log(N)
