"""Exact counting of matrices with prescribed margins.

Let A0(R, C) be the set of m x n zero-one matrices and A+(R, C) the set of
m x n non-negative integer matrices with row sums R and column sums C.
This module counts both sets exactly with arbitrary precision integers:

* :func:`enumerate_01` lists A0(R, C) outright (guarded, desk scale only),
  in lexicographic row-major order, which gives every other counter an
  independent ground truth and gives the sampler a stable index space.
* :func:`count_01` and :func:`count_nonneg` run a column-by-column dynamic
  program over residual row sums.  Without a cell mask the state is the
  sorted multiset of residuals (rows are exchangeable); with a mask rows
  are distinguishable and the raw residual vector is the state.
* :func:`permanent` is Ryser's inclusion-exclusion formula with Gray code
  updates, exact in O(2^k * k) integer operations.
* :func:`build_block_matrix` realizes |A0(R, C)| as the permanent of an
  explicit mn x mn zero-one block matrix divided by margin factorials,
  a second independent route to the same count and the carrier of the
  doubly stochastic scaling certificate produced by the max-entropy dual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import BadMargins, NotSquare, TooLarge
from .margins import CellMask, IntMatrix, Margins

__all__ = [
    "enumerate_01",
    "count_01",
    "count_nonneg",
    "permanent",
    "BlockMatrix01",
    "build_block_matrix",
    "count_01_via_permanent",
    "scale_block_matrix",
]


# ---------------------------------------------------------------------------
# explicit enumeration

def enumerate_01(
    margins: Margins, mask: CellMask | None = None, max_cells: int = 36
) -> list[IntMatrix]:
    """List every zero-one matrix with the given margins.

    Matrices are emitted in lexicographic order of their row-major entry
    tuple, so the k-th matrix of an instance is a stable identifier across
    runs; the sampler's uniformity tests index into this order.

    Parameters
    ----------
    margins : Margins
    mask : CellMask, optional
        Cells where the mask is False are forced to zero.
    max_cells : int
        Guard: instances with m * n > max_cells are refused (TooLarge).
        The output size itself can be exponential in m * n.

    Returns
    -------
    list of numpy integer arrays of shape (m, n).
    """
    m, n = margins.m, margins.n
    if m * n > max_cells:
        raise TooLarge(f"enumeration guard: {m}x{n} has {m * n} cells > {max_cells}")
    if mask is not None:
        mask.validate_against(margins)
        allowed = mask.grid
    else:
        allowed = np.ones((m, n), dtype=bool)

    # rows a given column can still draw from, among rows i..m-1
    open_below = np.zeros((m + 1, n), dtype=int)
    for i in range(m - 1, -1, -1):
        open_below[i] = open_below[i + 1] + allowed[i]

    rows = margins.rows
    out: list[IntMatrix] = []
    current: list[tuple[int, ...]] = []

    def rec(i: int, cres: list[int]) -> None:
        if i == m:
            if all(c == 0 for c in cres):
                mat = np.zeros((m, n), dtype=np.int64)
                for ii, ones in enumerate(current):
                    mat[ii, list(ones)] = 1
                out.append(mat)
            return
        # prune: every residual column sum must fit in the remaining rows
        for j in range(n):
            if cres[j] > open_below[i][j]:
                return
        positions = [j for j in range(n) if allowed[i, j] and cres[j] > 0]
        if rows[i] > len(positions):
            return
        # combinations() is lexicographic on position tuples, which is the
        # reverse of lexicographic order on the 0-1 row vectors
        for ones in reversed(list(combinations(positions, rows[i]))):
            for j in ones:
                cres[j] -= 1
            current.append(ones)
            rec(i + 1, cres)
            current.pop()
            for j in ones:
                cres[j] += 1

    rec(0, list(margins.cols))
    return out


# ---------------------------------------------------------------------------
# dynamic-programming counters

def _groups(resid: tuple[int, ...]) -> list[tuple[int, int]]:
    """Collapse a sorted residual tuple into (value, multiplicity) pairs."""
    out: list[tuple[int, int]] = []
    for v in resid:
        if out and out[-1][0] == v:
            out[-1] = (v, out[-1][1] + 1)
        else:
            out.append((v, 1))
    return out


def count_01(margins: Margins, mask: CellMask | None = None) -> int:
    """Exact |A0(R, C)|, the number of zero-one matrices with margins (R, C).

    Column-by-column dynamic program over residual row sums, memoized on
    the sorted residual multiset (rows with equal residuals are
    interchangeable, and transitions are counted by binomial coefficients
    per residual class).  With a mask, rows stop being interchangeable and
    the memo key is the raw residual vector.  All arithmetic is exact.

    There is no hard size guard: cost is driven by the number of distinct
    residual multisets, which stays modest for desk-scale margins but can
    grow quickly for long, spread-out margin vectors.
    """
    if mask is not None:
        mask.validate_against(margins)
        return _count_masked(margins, mask, zero_one=True)

    m, n = margins.m, margins.n
    if any(r > n for r in margins.rows) or any(c > m for c in margins.cols):
        return 0
    cols = sorted(margins.cols, reverse=True)  # order is immaterial, helps pruning
    memo: dict[tuple[int, tuple[int, ...]], int] = {}

    def rec(j: int, resid: tuple[int, ...]) -> int:
        if j == n:
            return 1  # balance forces all residuals to zero here
        left = n - j
        if resid[0] > left:
            return 0
        key = (j, resid)
        hit = memo.get(key)
        if hit is not None:
            return hit
        groups = _groups(resid)  # descending values
        need = cols[j]
        total = 0
        chosen: list[int] = []

        def alloc(gi: int, remaining: int) -> None:
            nonlocal total
            if gi == len(groups):
                if remaining:
                    return
                ways = 1
                new: list[int] = []
                for (v, k), a in zip(groups, chosen):
                    ways *= math.comb(k, a)
                    new.extend([v - 1] * a)
                    new.extend([v] * (k - a))
                new.sort(reverse=True)
                if new[0] > left - 1:
                    return
                total += ways * rec(j + 1, tuple(new))
                return
            v, k = groups[gi]
            lo = 0
            hi = min(k, remaining) if v > 0 else 0
            # rows whose residual equals the remaining column count must
            # receive a one in every remaining column, this one included
            if v == left:
                lo = k
                if lo > hi:
                    return
            for a in range(lo, hi + 1):
                chosen.append(a)
                alloc(gi + 1, remaining - a)
                chosen.pop()

        alloc(0, need)
        memo[key] = total
        return total

    return rec(0, tuple(sorted(margins.rows, reverse=True)))


def _bounded_multisets(v: int, k: int, cap: int):
    """Yield (used, ways, values) for assigning amounts in 0..v to k
    interchangeable slots with total <= cap.

    `ways` counts distinguishable assignments (multinomial over repeated
    amounts), `values` are the residuals v - amount left behind.
    """
    results: list[tuple[int, int, list[int]]] = []
    counts: list[tuple[int, int]] = []  # (amount, multiplicity)

    def rec(amount: int, slots: int, used: int) -> None:
        if amount == 0:
            ways = math.factorial(k)
            for _, b in counts:
                ways //= math.factorial(b)
            ways //= math.factorial(slots)  # slots left at amount zero
            values = [v] * slots
            for a, b in counts:
                values.extend([v - a] * b)
            results.append((used, ways, values))
            return
        max_b = min(slots, (cap - used) // amount)
        for b in range(max_b + 1):
            if b:
                counts.append((amount, b))
            rec(amount - 1, slots - b, used + amount * b)
            if b:
                counts.pop()

    rec(v, k, 0)
    return results


def count_nonneg(margins: Margins, mask: CellMask | None = None) -> int:
    """Exact |A+(R, C)|, the number of non-negative integer matrices.

    Same column DP as :func:`count_01`, except a column distributes its
    sum c_j in arbitrary amounts bounded only by the residual row sums.
    Transitions walk bounded multisets of amounts per residual class with
    multinomial multiplicities.  Never returns 0 for balanced margins:
    A+(R, C) always contains the greedy (northwest-corner) filling.
    """
    if mask is not None:
        mask.validate_against(margins)
        return _count_masked(margins, mask, zero_one=False)

    n = margins.n
    cols = sorted(margins.cols, reverse=True)
    memo: dict[tuple[int, tuple[int, ...]], int] = {}

    def rec(j: int, resid: tuple[int, ...]) -> int:
        if j == n:
            return 1
        key = (j, resid)
        hit = memo.get(key)
        if hit is not None:
            return hit
        groups = _groups(resid)
        need = cols[j]
        total = 0
        picked: list[list[int]] = []

        def alloc(gi: int, remaining: int, ways: int) -> None:
            nonlocal total
            if gi == len(groups):
                if remaining:
                    return
                new: list[int] = []
                for vals in picked:
                    new.extend(vals)
                new.sort(reverse=True)
                total += ways * rec(j + 1, tuple(new))
                return
            v, k = groups[gi]
            for used, w, values in _bounded_multisets(v, k, min(remaining, v * k)):
                picked.append(values)
                alloc(gi + 1, remaining - used, ways * w)
                picked.pop()

        alloc(0, need, 1)
        memo[key] = total
        return total

    result = rec(0, tuple(sorted(margins.rows, reverse=True)))
    assert result > 0, "A+(R, C) is never empty for balanced margins"
    return result


def _count_masked(margins: Margins, mask: CellMask, zero_one: bool) -> int:
    """DP counter with prescribed zeros: raw residual vector as memo key."""
    m, n = margins.m, margins.n
    allowed = mask.grid
    # permitted cells per row among columns j..n-1, for pruning
    open_right = np.zeros((m, n + 1), dtype=int)
    for j in range(n - 1, -1, -1):
        open_right[:, j] = open_right[:, j + 1] + allowed[:, j]

    cols = margins.cols
    memo: dict[tuple[int, tuple[int, ...]], int] = {}

    def rec(j: int, resid: tuple[int, ...]) -> int:
        if j == n:
            return 1 if all(v == 0 for v in resid) else 0
        if zero_one and any(resid[i] > open_right[i, j] for i in range(m)):
            return 0
        key = (j, resid)
        hit = memo.get(key)
        if hit is not None:
            return hit
        need = cols[j]
        total = 0
        if zero_one:
            rows_open = [i for i in range(m) if allowed[i, j] and resid[i] > 0]
            if need <= len(rows_open):
                for chosen in combinations(rows_open, need):
                    new = list(resid)
                    for i in chosen:
                        new[i] -= 1
                    total += rec(j + 1, tuple(new))
        else:
            rows_open = [i for i in range(m) if allowed[i, j] and resid[i] > 0]

            def spread(idx: int, remaining: int, new: list[int]) -> None:
                nonlocal total
                if remaining == 0:
                    total += rec(j + 1, tuple(new))
                    return
                if idx == len(rows_open):
                    return
                i = rows_open[idx]
                for a in range(min(remaining, resid[i]) + 1):
                    new[i] -= a
                    spread(idx + 1, remaining - a, new)
                    new[i] += a

            spread(0, need, list(resid))
        memo[key] = total
        return total

    return rec(0, tuple(margins.rows))


# ---------------------------------------------------------------------------
# permanents and the block-matrix route

def permanent(matrix, max_size: int = 24) -> int:
    """Exact permanent of a square integer matrix, Ryser + Gray code.

    per(A) = (-1)^k * sum over nonempty column subsets S of
    (-1)^|S| * prod_i (sum_{j in S} a_ij).  The Gray code walk changes one
    column per step, so each of the 2^k - 1 terms costs O(k) exact integer
    operations.  Guarded at k <= max_size (default 24).
    """
    arr = np.asarray(matrix)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise NotSquare(f"permanent needs a square matrix, got shape {arr.shape}")
    k = arr.shape[0]
    if k > max_size:
        raise TooLarge(f"permanent guard: size {k} > {max_size}")
    if k == 0:
        return 1
    cols = [[int(x) for x in arr[:, j]] for j in range(k)]
    sums = [0] * k
    gray = 0
    size = 0
    acc = 0
    for g in range(1, 1 << k):
        j = (g & -g).bit_length() - 1
        bit = 1 << j
        col = cols[j]
        if gray & bit:
            size -= 1
            for i in range(k):
                sums[i] -= col[i]
        else:
            size += 1
            for i in range(k):
                sums[i] += col[i]
        gray ^= bit
        prod = 1
        for s in sums:
            if s == 0:
                prod = 0
                break
            prod *= s
        if prod:
            acc += prod if (size & 1) == 0 else -prod
    return acc if (k & 1) == 0 else -acc


@dataclass(frozen=True)
class BlockMatrix01:
    """The mn x mn zero-one matrix B with per(B) proportional to |A0(R, C)|.

    Columns come in m blocks of n: column (i, j) sits at index i * n + j and
    stands for cell (i, j) of the original matrix.  Rows come in two kinds:

    * for each original row i, a block of (n - r_i) identical "slack" rows
      with ones across all of column block i;
    * for each original column j, a block of c_j identical "unit" rows with
      ones at position j of every column block.

    Then |A0(R, C)| = per(B) / (prod_i (n - r_i)! * prod_j c_j!).

    ``row_block_kinds`` / ``row_block_owners`` / ``row_block_sizes`` describe
    the row layout top to bottom; slack blocks (owner i) precede unit blocks
    (owner j).
    """

    m: int
    n: int
    entries: np.ndarray
    row_block_kinds: tuple[str, ...]
    row_block_owners: tuple[int, ...]
    row_block_sizes: tuple[int, ...]

    @property
    def size(self) -> int:
        return self.m * self.n


def build_block_matrix(margins: Margins) -> BlockMatrix01:
    """Assemble the block matrix whose permanent encodes |A0(R, C)|."""
    m, n = margins.m, margins.n
    if any(r > n for r in margins.rows):
        raise BadMargins("row sum exceeds the number of columns")
    if any(c > m for c in margins.cols):
        raise BadMargins("column sum exceeds the number of rows")
    size = m * n
    entries = np.zeros((size, size), dtype=np.int64)
    kinds: list[str] = []
    owners: list[int] = []
    sizes: list[int] = []
    row = 0
    for i, r in enumerate(margins.rows):
        kinds.append("slack")
        owners.append(i)
        sizes.append(n - r)
        for _ in range(n - r):
            entries[row, i * n : (i + 1) * n] = 1
            row += 1
    for j, c in enumerate(margins.cols):
        kinds.append("unit")
        owners.append(j)
        sizes.append(c)
        for _ in range(c):
            entries[row, [i * n + j for i in range(m)]] = 1
            row += 1
    assert row == size, "row blocks must tile the mn rows exactly"
    return BlockMatrix01(m, n, entries, tuple(kinds), tuple(owners), tuple(sizes))


def count_01_via_permanent(margins: Margins, max_size: int = 24) -> int:
    """|A0(R, C)| through per(B), an independent check on the DP counter."""
    block = build_block_matrix(margins)
    p = permanent(block.entries, max_size=max_size)
    denom = 1
    for r in margins.rows:
        denom *= math.factorial(margins.n - r)
    for c in margins.cols:
        denom *= math.factorial(c)
    q, rem = divmod(p, denom)
    assert rem == 0, "per(B) must be divisible by the margin factorials"
    return q


def scale_block_matrix(block: BlockMatrix01, x, y) -> np.ndarray:
    """Scale B to the doubly stochastic certificate matrix B'.

    With x, y the exponentiated optimal duals of the zero-one max-entropy
    program (so z_ij = x_i y_j / (1 + x_i y_j) has margins (R, C)), scaling

    * slack rows of block i by 1 / (x_i * (n - r_i)),
    * unit rows of column j by y_j / c_j,
    * column (i, j) by x_i / (1 + x_i y_j)

    makes every row and column of B' sum to one.  Requires r_i < n for all
    rows hosting slack blocks (interior instances).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    m, n = block.m, block.n
    if x.shape != (m,) or y.shape != (n,):
        raise BadMargins(f"scaling vectors must have shapes ({m},) and ({n},)")
    row_factors = np.empty(block.size)
    row = 0
    for kind, owner, size in zip(
        block.row_block_kinds, block.row_block_owners, block.row_block_sizes
    ):
        if kind == "slack":
            if size == 0:
                continue
            row_factors[row : row + size] = 1.0 / (x[owner] * size)
        else:
            if size == 0:
                continue
            row_factors[row : row + size] = y[owner] / size
        row += size
    col_factors = np.empty(block.size)
    for i in range(m):
        col_factors[i * n : (i + 1) * n] = x[i] / (1.0 + x[i] * y)
    return row_factors[:, None] * block.entries * col_factors[None, :]
