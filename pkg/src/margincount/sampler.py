"""Exact-uniform rejection sampling of matrices with prescribed margins.

The max-entropy matrix Z of an instance defines a product measure X of
independent Bernoulli (zero-one mode) or geometric (nonneg mode) entries
with mean Z.  On the event that X hits the target margins exactly, its
probability mass function is constant: Pr{X = D} = e^{-entropy} for every
D in the class.  Rejection is therefore exact. Draw X, accept iff its row
sums equal R and its column sums equal C, and every accepted matrix is
uniform on A0(R, C) resp. A+(R, C) with acceptance probability

    Pr{X in A} = |A(R, C)| * e^{-entropy}.

Budgets are user-facing: the theory bounds the acceptance rate below only
by an inverse polynomial with an unspecified constant.

Randomness is reproducible: a :class:`RngSeed` (seed, stream) pins every
draw.  Trials can be split across a fixed worker count, each worker owning
a child stream; trials are assigned round-robin by global index and
acceptances are canonicalized by that index, so the output depends only on
(seed, stream, workers), not on scheduling or batch size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetExhausted, OutOfRange
from .exact import count_01, count_nonneg
from .margins import IntMatrix, Margins
from .maxent import (
    MaxEntSolution,
    Mode,
    bounds_01,
    bounds_nonneg,
    solve_maxent_01,
    solve_maxent_nonneg,
)

__all__ = [
    "RngSeed",
    "SampleReport",
    "ConcentrationReport",
    "bernoulli_matrix",
    "geometric_matrix",
    "sample_uniform",
    "concentration_report",
]

# instances with at most this many cells get an automatic exact count for
# the predicted acceptance rate (the column DP is cheap there)
AUTO_COUNT_CELLS = 36


@dataclass(frozen=True)
class RngSeed:
    """Reproducible randomness root: a 64-bit seed plus a stream id.

    Each (seed, stream, worker) triple owns an independent child stream;
    identical triples reproduce identical draws bit for bit across runs
    and platforms (PCG64 behind numpy's default_rng).
    """

    seed: int
    stream: int = 0

    def generator(self, worker: int = 0) -> np.random.Generator:
        return np.random.default_rng(
            np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream, worker))
        )


def _generator(rng) -> np.random.Generator:
    if isinstance(rng, RngSeed):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise OutOfRange("rng must be an RngSeed or a numpy Generator")


def bernoulli_matrix(Z, rng) -> IntMatrix:
    """One matrix of independent Bernoulli entries with means Z in [0, 1]."""
    z = np.asarray(Z, dtype=float)
    if np.any(z < 0.0) or np.any(z > 1.0):
        raise OutOfRange("Bernoulli means must lie in [0, 1]")
    gen = _generator(rng)
    return (gen.random(z.shape) < z).astype(np.int64)


def geometric_matrix(Z, rng) -> IntMatrix:
    """One matrix of independent geometric entries with means Z >= 0.

    Cell law: Pr{x = k} = p q^k for k = 0, 1, ... with q = z/(1+z), so the
    mean is exactly z.  Sampled by inversion, x = floor(ln(1-U)/ln(q)),
    which stays O(1) even for the large means that appear in stressed
    instances; z = 0 cells are constant zero.
    """
    z = np.asarray(Z, dtype=float)
    if np.any(z < 0.0):
        raise OutOfRange("geometric means must be >= 0")
    gen = _generator(rng)
    return _geometric_block(z, gen.random(z.shape))


def _geometric_block(z: np.ndarray, u: np.ndarray) -> np.ndarray:
    q = z / (1.0 + z)
    out = np.zeros(u.shape, dtype=np.int64)
    pos = q > 0.0
    if np.any(pos):
        # 1 - U lies in (0, 1], so the ratio is finite and >= 0
        out[pos] = np.floor(np.log1p(-u[pos]) / np.log(q[pos])).astype(np.int64)
    return out


@dataclass(frozen=True)
class SampleReport:
    """Trial statistics of one rejection-sampling run.

    ``acceptance_rate = n_accepted / n_trials``.  ``predicted_rate_log``
    is ln(count) - entropy when an exact count was available (supplied, or
    computed automatically on small instances), else None; in either case
    ``predicted_rate_log_interval`` brackets the log-rate using the
    explicit entropy bounds (the nonneg lower end uses the polynomial
    correction with constant 1, a reporting convention, not a theorem).
    ``samples`` holds accepted matrices up to the caller's cap, in trial
    order.
    """

    mode: Mode
    n_trials: int
    n_accepted: int
    acceptance_rate: float
    predicted_rate_log: float | None
    predicted_rate_log_interval: tuple[float, float] | None
    samples: list = field(repr=False)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "n_trials": self.n_trials,
            "n_accepted": self.n_accepted,
            "acceptance_rate": self.acceptance_rate,
            "predicted_rate_log": self.predicted_rate_log,
            "predicted_rate_log_interval": (
                list(self.predicted_rate_log_interval)
                if self.predicted_rate_log_interval is not None
                else None
            ),
            "n_samples_kept": len(self.samples),
        }


def _predicted_rate(
    margins: Margins,
    mode: Mode,
    solution: MaxEntSolution,
    exact_count: int | None,
) -> tuple[float | None, tuple[float, float]]:
    if exact_count is None and margins.m * margins.n <= AUTO_COUNT_CELLS:
        exact_count = (
            count_01(margins) if mode == "zero-one" else count_nonneg(margins)
        )
    point = None
    if exact_count is not None and exact_count > 0:
        point = math.log(exact_count) - solution.entropy
    if mode == "zero-one":
        lo, hi = bounds_01(margins, solution=solution)
    else:
        hi, correction = bounds_nonneg(margins, solution=solution)
        lo = hi - correction
    return point, (lo - solution.entropy, hi - solution.entropy)


def sample_uniform(
    margins: Margins,
    mode: Mode,
    rng: RngSeed,
    budget: int = 10**7,
    n_samples: int = 1,
    keep: int | None = 64,
    workers: int = 1,
    solution: MaxEntSolution | None = None,
    exact_count: int | None = None,
    batch: int = 8192,
) -> tuple[IntMatrix, SampleReport]:
    """Draw exactly uniform matrices with the given margins by rejection.

    Runs independent trials until ``n_samples`` acceptances or ``budget``
    trials, whichever comes first, and returns ``(first_accepted,
    report)``.  Zero acceptances raise BudgetExhausted carrying the
    report.

    Trials are numbered globally; worker w (of ``workers``) executes
    trials w, w + workers, ... on its own child stream of ``rng``.
    Acceptance order and the early-stopping point are defined by global
    trial index, which makes the result a pure function of
    (seed, stream, workers) regardless of batching.

    ``keep`` caps the stored sample list (None keeps every acceptance);
    ``solution``/``exact_count`` skip the internal maxent solve / exact
    count when the caller already has them.
    """
    if budget < 1:
        raise OutOfRange("budget must be >= 1")
    if workers < 1:
        raise OutOfRange("workers must be >= 1")
    if solution is None:
        solution = (
            solve_maxent_01(margins) if mode == "zero-one" else solve_maxent_nonneg(margins)
        )
    elif solution.mode != mode:
        raise OutOfRange("supplied solution was solved for a different mode")
    Z = solution.Z
    m, n = margins.m, margins.n
    R = np.asarray(margins.rows)
    C = np.asarray(margins.cols)

    n_assigned = [(budget - w + workers - 1) // workers for w in range(workers)]
    gens = [rng.generator(w) for w in range(workers)]
    done = [0] * workers
    accepted: list[tuple[int, np.ndarray]] = []

    def run_batch(w: int, count: int) -> None:
        u = gens[w].random((count, m, n))
        if mode == "zero-one":
            draws = (u < Z).astype(np.int64)
        else:
            draws = _geometric_block(np.broadcast_to(Z, u.shape), u)
        ok = np.all(draws.sum(axis=2) == R, axis=1) & np.all(
            draws.sum(axis=1) == C, axis=1
        )
        for k in np.flatnonzero(ok):
            global_index = w + (done[w] + int(k)) * workers
            accepted.append((global_index, draws[int(k)]))
        done[w] += count

    while True:
        remaining = [n_assigned[w] - done[w] for w in range(workers)]
        if all(r <= 0 for r in remaining):
            n_trials = budget
            break
        for w in range(workers):
            if remaining[w] > 0:
                run_batch(w, min(batch, remaining[w]))
        accepted.sort(key=lambda pair: pair[0])
        if len(accepted) >= n_samples:
            # trials beyond the n-th acceptance never happened, canonically
            cutoff = accepted[n_samples - 1][0]
            accepted = [p for p in accepted if p[0] <= cutoff]
            n_trials = cutoff + 1
            break

    accepted.sort(key=lambda pair: pair[0])
    n_accepted = len(accepted)
    point, interval = _predicted_rate(margins, mode, solution, exact_count)
    kept = [mat for _, mat in (accepted if keep is None else accepted[:keep])]
    report = SampleReport(
        mode=mode,
        n_trials=n_trials,
        n_accepted=n_accepted,
        acceptance_rate=n_accepted / n_trials,
        predicted_rate_log=point,
        predicted_rate_log_interval=interval,
        samples=kept,
    )
    if n_accepted == 0:
        raise BudgetExhausted(
            f"no acceptance in {n_trials} trials", report=report
        )
    return kept[0], report


@dataclass(frozen=True)
class ConcentrationReport:
    """Empirical concentration of a cell-set sum over uniform samples.

    For an index set S, sigma_S(D) is the sum of the entries of D over S.
    The report compares the max-entropy prediction sigma_S(Z) with the
    distribution of sigma_S(D) over accepted uniform samples; quantiles
    are of the relative deviation |sigma_S(D)/sigma_S(Z) - 1|.
    """

    cells: tuple[tuple[int, int], ...]
    sigma_expected: float
    n_samples: int
    mean: float
    stdev: float
    min: float
    max: float
    rel_dev_quantiles: dict

    def to_dict(self) -> dict:
        return {
            "cells": [list(c) for c in self.cells],
            "sigma_expected": self.sigma_expected,
            "n_samples": self.n_samples,
            "mean": self.mean,
            "stdev": self.stdev,
            "min": self.min,
            "max": self.max,
            "rel_dev_quantiles": self.rel_dev_quantiles,
        }


def _normalize_cells(S, m: int, n: int) -> tuple[tuple[int, int], ...]:
    grid = np.asarray(S)
    if grid.dtype == bool and grid.shape == (m, n):
        pairs = [(int(i), int(j)) for i, j in zip(*np.nonzero(grid))]
    else:
        pairs = [(int(i), int(j)) for i, j in S]
    for i, j in pairs:
        if not (0 <= i < m and 0 <= j < n):
            raise OutOfRange(f"cell ({i}, {j}) outside the {m}x{n} grid")
    return tuple(pairs)


def concentration_report(
    margins: Margins,
    mode: Mode,
    S: Iterable[tuple[int, int]] | Sequence[Sequence[bool]],
    n_samples: int,
    rng: RngSeed,
    budget: int = 10**7,
    workers: int = 1,
) -> ConcentrationReport:
    """Measure how tightly sigma_S concentrates around sigma_S(Z).

    S is either an iterable of (i, j) cell pairs or a boolean m x n grid.
    Draws ``n_samples`` exactly uniform matrices (raising BudgetExhausted
    through :func:`sample_uniform` if the budget cannot produce even one)
    and summarizes sigma_S over them.
    """
    solution = (
        solve_maxent_01(margins) if mode == "zero-one" else solve_maxent_nonneg(margins)
    )
    cells = _normalize_cells(S, margins.m, margins.n)
    rows = np.array([c[0] for c in cells], dtype=int)
    cols = np.array([c[1] for c in cells], dtype=int)
    sigma_z = float(solution.Z[rows, cols].sum())

    _, report = sample_uniform(
        margins,
        mode,
        rng,
        budget=budget,
        n_samples=n_samples,
        keep=None,
        workers=workers,
        solution=solution,
    )
    values = np.array([float(mat[rows, cols].sum()) for mat in report.samples])
    if sigma_z > 0.0:
        rel = np.abs(values / sigma_z - 1.0)
    else:
        rel = np.abs(values)
    qs = (0.5, 0.9, 0.99, 1.0)
    quantiles = {str(q): float(np.quantile(rel, q)) for q in qs}
    return ConcentrationReport(
        cells=cells,
        sigma_expected=sigma_z,
        n_samples=len(values),
        mean=float(values.mean()),
        stdev=float(values.std(ddof=1)) if len(values) > 1 else 0.0,
        min=float(values.min()),
        max=float(values.max()),
        rel_dev_quantiles=quantiles,
    )
