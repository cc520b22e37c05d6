"""Edgeworth-corrected Gaussian approximations of margin counts.

Write X for the max-entropy random matrix of an instance (independent
Bernoulli or geometric entries with mean matrix Z) and Y for its vector of
row and column sums.  The count identity

    |A(R, C)| = e^entropy * Pr{ Y = (R, C) }

reduces counting to a lattice point probability, and Pr{Y = (R, C)} is
approximated by Fourier inversion over the dual torus.  The characteristic
function of Y decays like exp(-q(theta)) where

    q(s, t) = 1/2 * sum_ij w_ij (s_i + t_j)^2,
    w_ij = z_ij - z_ij^2   (zero-one)    or    z_ij + z_ij^2   (nonneg),

a positive semidefinite quadratic form whose kernel is spanned by
u = (1,...,1; -1,...,-1); all integrals live on the hyperplane H
orthogonal to u.  The leading term gives the Gaussian count

    gaussian_log = entropy + ln(m+n)/2 - (m+n-1)/2 * ln(4*pi)
                   - log_det_qH / 2

with det q|H the product of the nonzero eigenvalues of the form q (half
the margin-covariance Hessian).  The next Edgeworth order corrects by
exp(-mu/2 + nu) where, under the Gaussian on H with density proportional
to e^{-q} (covariance = pseudo-inverse of the Hessian),

    mu = E phi^2,  phi = sum_ij a_ij (s_i + t_j)^3,
    nu = E psi,    psi = sum_ij b_ij (s_i + t_j)^4,

with third/fourth cumulant coefficients a = z(1 -+ z)(2z -+ 1)/6 and
b = z(1 -+ z)(6z^2 -+ 6z + 1)/24 (upper signs zero-one, lower nonneg).
Both expectations are evaluated exactly through Isserlis' theorem; a
Monte-Carlo estimator over the same Gaussian ships as the test oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import KernelDimensionError, OutOfRange
from .margins import Margins
from .maxent import MaxEntSolution, Mode, solve_maxent_01, solve_maxent_nonneg

__all__ = [
    "QuadraticFormQ",
    "EdgeworthData",
    "build_q",
    "log_det_on_H",
    "gaussian_moments",
    "gaussian_moments_mc",
    "asymptotic_count",
]

# relative eigenvalue threshold identifying the analytic kernel direction
KERNEL_RTOL = 1e-8


@dataclass(frozen=True)
class QuadraticFormQ:
    """The margin-fluctuation quadratic form q(s,t) = 1/2 sum w (s_i+t_j)^2.

    ``hessian`` is the (m+n) x (m+n) second-derivative matrix: row blocks
    carry the weight row/column sums on the diagonal and the weights
    themselves on the mixed block.  It annihilates u = (1_m; -1_n) and is
    also the covariance matrix of the row/column sum vector of the
    max-entropy random matrix.
    """

    mode: Mode
    weights: np.ndarray
    m: int
    n: int
    hessian: np.ndarray

    def kernel_vector(self) -> np.ndarray:
        u = np.concatenate([np.ones(self.m), -np.ones(self.n)])
        return u / np.linalg.norm(u)


def build_q(Z, mode: Mode) -> QuadraticFormQ:
    """Assemble the quadratic form of an interior mean matrix Z.

    Zero-one mode needs 0 < z < 1 entry-wise, nonneg mode z > 0; the
    weights are then strictly positive and the Hessian kernel is exactly
    one-dimensional.
    """
    z = np.asarray(Z, dtype=float)
    if z.ndim != 2 or z.size == 0:
        raise OutOfRange("Z must be a non-empty 2-d matrix")
    if mode == "zero-one":
        if np.any(z <= 0.0) or np.any(z >= 1.0):
            raise OutOfRange("zero-one quadratic form needs 0 < z < 1")
        w = z - z * z
    elif mode == "nonneg":
        if np.any(z <= 0.0):
            raise OutOfRange("nonneg quadratic form needs z > 0")
        w = z + z * z
    else:
        raise OutOfRange(f"unknown mode {mode!r}")
    m, n = z.shape
    H = np.zeros((m + n, m + n))
    H[:m, :m] = np.diag(w.sum(axis=1))
    H[m:, m:] = np.diag(w.sum(axis=0))
    H[:m, m:] = w
    H[m:, :m] = w.T
    return QuadraticFormQ(mode=mode, weights=w, m=m, n=n, hessian=H)


def _eigen_split(q: QuadraticFormQ) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecompose the Hessian and strip its one-dimensional kernel.

    Returns (nonzero eigenvalues, matching eigenvectors).  Raises
    KernelDimensionError unless exactly one eigenvalue is below
    KERNEL_RTOL times the largest: more means a disconnected instance,
    none means the input was not a margin form at all.
    """
    lam, U = np.linalg.eigh(q.hessian)
    scale = float(np.abs(lam).max())
    if scale == 0.0:
        raise KernelDimensionError("zero quadratic form")
    tiny = np.abs(lam) < KERNEL_RTOL * scale
    if int(tiny.sum()) != 1:
        raise KernelDimensionError(
            f"expected a one-dimensional kernel, found {int(tiny.sum())} "
            "near-zero eigenvalues"
        )
    keep = ~tiny
    lam_nz = lam[keep]
    if np.any(lam_nz <= 0.0):
        raise KernelDimensionError("nonzero spectrum is not strictly positive")
    return lam_nz, U[:, keep]


def log_det_on_H(q: QuadraticFormQ) -> float:
    """ln det(q|H): sum of ln of the m+n-1 nonzero eigenvalues of the form.

    The eigenvalues of the *form* q (the matrix M with q(x) = x^T M x) are
    half those of the Hessian; it is this determinant that normalizes the
    Gaussian count correctly against the (4*pi) powers in gaussian_log.
    """
    lam_nz, _ = _eigen_split(q)
    return float(np.log(lam_nz / 2.0).sum())


def _sigma_pieces(q: QuadraticFormQ):
    """Pseudo-inverse covariance and derived per-cell variances."""
    lam_nz, U_nz = _eigen_split(q)
    Sig = (U_nz / lam_nz) @ U_nz.T
    m, n = q.m, q.n
    sig2 = np.diag(Sig)[:m][:, None] + 2.0 * Sig[:m, m:] + np.diag(Sig)[m:][None, :]
    return Sig, sig2


def _phi_psi_coefficients(Z, mode: Mode) -> tuple[np.ndarray, np.ndarray]:
    z = np.asarray(Z, dtype=float)
    if mode == "zero-one":
        a = z * (1.0 - z) * (2.0 * z - 1.0) / 6.0
        b = z * (1.0 - z) * (6.0 * z * z - 6.0 * z + 1.0) / 24.0
    else:
        a = z * (1.0 + z) * (2.0 * z + 1.0) / 6.0
        b = z * (1.0 + z) * (6.0 * z * z + 6.0 * z + 1.0) / 24.0
    return a, b


def gaussian_moments(
    q: QuadraticFormQ, Z, mode: Mode, chunk: int = 1024
) -> tuple[float, float]:
    """Exact Edgeworth moments (mu, nu) = (E phi^2, E psi).

    Expectations are over the Gaussian on H with covariance the
    pseudo-inverse of the Hessian.  With ell_ij = s_i + t_j, Isserlis'
    theorem gives E[ell_ij^3 ell_kl^3] = 9 s2_ij s2_kl c + 6 c^3 for the
    cross-covariance c of the pair, and E[ell^4] = 3 s2^2, so

        mu = sum over cell pairs a_ij a_kl (9 s2_ij s2_kl c + 6 c^3),
        nu = 3 * sum b_ij s2_ij^2.

    The pair sum runs in O((mn)^2) time but only O(chunk * mn) memory:
    cross-covariances are assembled per chunk of cells straight from the
    (m+n)^2 pseudo-inverse.
    """
    a, b = _phi_psi_coefficients(Z, mode)
    Sig, sig2 = _sigma_pieces(q)
    m, n = q.m, q.n
    nu = float(3.0 * (b * sig2 * sig2).sum())

    I = np.repeat(np.arange(m), n)  # cell p = (i, j) -> row index
    J = np.tile(np.arange(n), m) + m  # -> shifted column index
    a_flat = a.reshape(-1)
    asig = (a * sig2).reshape(-1)
    mu = 0.0
    for lo in range(0, m * n, chunk):
        hi = min(lo + chunk, m * n)
        C = (
            Sig[np.ix_(I[lo:hi], I)]
            + Sig[np.ix_(I[lo:hi], J)]
            + Sig[np.ix_(J[lo:hi], I)]
            + Sig[np.ix_(J[lo:hi], J)]
        )
        mu += 9.0 * float(asig[lo:hi] @ (C @ asig))
        mu += 6.0 * float(a_flat[lo:hi] @ ((C * C * C) @ a_flat))
    return mu, nu


def gaussian_moments_mc(
    q: QuadraticFormQ,
    Z,
    mode: Mode,
    n_draws: int = 10**6,
    rng: np.random.Generator | None = None,
    batch: int = 20000,
) -> dict:
    """Monte-Carlo oracle for (mu, nu) over the same Gaussian on H.

    Draws theta = U diag(lambda^-1/2) xi with xi standard normal, so the
    sample covariance is the pseudo-inverse used by the exact path.
    Returns {"mu", "nu", "se_mu", "se_nu", "n_draws"} with standard errors
    of the two averages.  This is the testing oracle, not the production
    path.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    a, b = _phi_psi_coefficients(Z, mode)
    lam_nz, U_nz = _eigen_split(q)
    m, n = q.m, q.n
    half = U_nz / np.sqrt(lam_nz)  # theta = xi @ half.T
    s1 = s2 = t1 = t2 = 0.0
    done = 0
    while done < n_draws:
        B = min(batch, n_draws - done)
        xi = rng.standard_normal((B, lam_nz.size))
        theta = xi @ half.T
        ell = theta[:, :m, None] + theta[:, None, m:]
        phi = (a[None, :, :] * ell**3).sum(axis=(1, 2))
        psi = (b[None, :, :] * ell**4).sum(axis=(1, 2))
        phi2 = phi * phi
        s1 += float(phi2.sum())
        s2 += float((phi2 * phi2).sum())
        t1 += float(psi.sum())
        t2 += float((psi * psi).sum())
        done += B
    mu = s1 / n_draws
    nu = t1 / n_draws
    var_mu = max(s2 / n_draws - mu * mu, 0.0)
    var_nu = max(t2 / n_draws - nu * nu, 0.0)
    return {
        "mu": mu,
        "nu": nu,
        "se_mu": math.sqrt(var_mu / n_draws),
        "se_nu": math.sqrt(var_nu / n_draws),
        "n_draws": n_draws,
    }


@dataclass(frozen=True)
class EdgeworthData:
    """Gaussian and Edgeworth-corrected log-count approximations.

    ``corrected_log = gaussian_log - mu/2 + nu`` by construction.  The
    regime fields report (never enforce) the applicability conditions of
    the asymptotic theory: entries of Z separated from their mode's
    boundary by ``delta`` and aspect ratio at most 1/delta.
    """

    log_det_qH: float
    mu: float
    nu: float
    gaussian_log: float
    corrected_log: float
    min_z: float
    max_z: float
    aspect_ratio: float
    in_regime: bool

    def to_dict(self) -> dict:
        return {
            "log_det_qH": self.log_det_qH,
            "mu": self.mu,
            "nu": self.nu,
            "gaussian_log": self.gaussian_log,
            "corrected_log": self.corrected_log,
            "min_z": self.min_z,
            "max_z": self.max_z,
            "aspect_ratio": self.aspect_ratio,
            "in_regime": self.in_regime,
        }


def asymptotic_count(
    margins: Margins,
    mode: Mode,
    solution: MaxEntSolution | None = None,
    delta: float = 0.1,
) -> EdgeworthData:
    """Edgeworth-corrected estimate of ln |A(R, C)| for the given mode.

    Solves the max-entropy program (unless a converged ``solution`` is
    supplied), builds the quadratic form at Z, and evaluates

        gaussian_log  = entropy + ln(m+n)/2 - (m+n-1)/2 * ln(4 pi)
                        - log_det_qH / 2
        corrected_log = gaussian_log - mu/2 + nu.

    ``delta`` only drives the in_regime metadata flag.
    """
    if solution is None:
        if mode == "zero-one":
            solution = solve_maxent_01(margins)
        elif mode == "nonneg":
            solution = solve_maxent_nonneg(margins)
        else:
            raise OutOfRange(f"unknown mode {mode!r}")
    z = solution.Z
    q = build_q(z, mode)
    logdet = log_det_on_H(q)
    mu, nu = gaussian_moments(q, z, mode)
    m, n = q.m, q.n
    gaussian_log = (
        solution.entropy
        + 0.5 * math.log(m + n)
        - 0.5 * (m + n - 1) * math.log(4.0 * math.pi)
        - 0.5 * logdet
    )
    corrected_log = gaussian_log - mu / 2.0 + nu
    min_z = float(z.min())
    max_z = float(z.max())
    aspect = max(m, n) / min(m, n)
    if mode == "zero-one":
        in_regime = min_z >= delta and max_z <= 1.0 - delta and aspect <= 1.0 / delta
    else:
        in_regime = min_z >= delta and max_z <= 1.0 / delta and aspect <= 1.0 / delta
    return EdgeworthData(
        log_det_qH=logdet,
        mu=mu,
        nu=nu,
        gaussian_log=gaussian_log,
        corrected_log=corrected_log,
        min_z=min_z,
        max_z=max_z,
        aspect_ratio=aspect,
        in_regime=in_regime,
    )
