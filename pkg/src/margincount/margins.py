"""Margin vectors for matrices with prescribed row and column sums.

Throughout the package a *margin pair* is a pair of integer vectors
R = (r_1, ..., r_m) and C = (c_1, ..., c_n) with equal totals

    N = r_1 + ... + r_m = c_1 + ... + c_n.

Two families of matrices share these margins: the m x n zero-one matrices
(each entry 0 or 1) and the m x n non-negative integer matrices.  The
first family is non-empty exactly when the Gale-Ryser condition holds;
the second is non-empty for every balanced pair of non-negative vectors.

This module owns the validated :class:`Margins` value type, the optional
:class:`CellMask` of prescribed zero cells, the Gale-Ryser feasibility
test, the majorization (domination) partial order on margin vectors, and
the cloning construction that replaces an m x n instance by a km x kn one
with every row sum r_i repeated k times at value k * r_i.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import BadMargins, LengthMismatch, NegativeEntry, OutOfRange, Unbalanced

# An integer matrix is represented as a plain 2-d numpy array of an integer
# dtype; exact counts are plain Python ints (arbitrary precision natively).
IntMatrix = np.ndarray
BigCount = int


def _as_int_tuple(values: Iterable, what: str) -> tuple[int, ...]:
    """Coerce a margin vector to a tuple of Python ints, rejecting junk."""
    out = []
    for v in values:
        iv = int(v)
        if iv != v:
            raise NegativeEntry(f"{what} entry {v!r} is not an integer")
        if iv < 0:
            raise NegativeEntry(f"{what} entry {iv} is negative")
        out.append(iv)
    if not out:
        raise LengthMismatch(f"{what} vector is empty")
    return tuple(out)


@dataclass(frozen=True)
class Margins:
    """A balanced pair of non-negative integer margin vectors.

    Instances are immutable and always valid: construction enforces
    non-negativity, non-emptiness and the balance condition sum(rows)
    == sum(cols).  Use :func:`validate_margins` to build one from raw
    user input.
    """

    rows: tuple[int, ...]
    cols: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", _as_int_tuple(self.rows, "row-sum"))
        object.__setattr__(self, "cols", _as_int_tuple(self.cols, "column-sum"))
        if sum(self.rows) != sum(self.cols):
            raise Unbalanced(
                f"sum(rows)={sum(self.rows)} != sum(cols)={sum(self.cols)}"
            )

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.cols)

    @property
    def total(self) -> int:
        """The common total N of the two margin vectors."""
        return sum(self.rows)

    def transpose(self) -> "Margins":
        return Margins(self.cols, self.rows)

    def to_dict(self) -> dict:
        return {"rows": list(self.rows), "cols": list(self.cols)}


class CellMask:
    """Boolean m x n grid of permitted cells (False = prescribed zero).

    The mask is stored as a read-only boolean array.  ``from_strings``
    accepts the serialization used by the CLI: a list of m strings of
    '0'/'1' characters of length n, '1' meaning the cell may be occupied.
    """

    def __init__(self, grid):
        arr = np.asarray(grid, dtype=bool)
        if arr.ndim != 2 or arr.size == 0:
            raise LengthMismatch("mask must be a non-empty 2-d grid")
        arr = arr.copy()
        arr.setflags(write=False)
        self.grid = arr

    @property
    def shape(self) -> tuple[int, int]:
        return self.grid.shape

    @classmethod
    def from_strings(cls, lines: Sequence[str]) -> "CellMask":
        if not lines:
            raise LengthMismatch("mask string list is empty")
        width = len(lines[0])
        rows = []
        for line in lines:
            if len(line) != width:
                raise LengthMismatch("mask rows have unequal lengths")
            if set(line) - {"0", "1"}:
                raise LengthMismatch(f"mask row {line!r} has characters outside 0/1")
            rows.append([ch == "1" for ch in line])
        return cls(rows)

    def to_strings(self) -> list[str]:
        return ["".join("1" if b else "0" for b in row) for row in self.grid]

    def validate_against(self, margins: Margins) -> None:
        """Check shape and reject rows/columns left with no permitted cell.

        A row (column) with a positive margin but no permitted cell makes
        every counting and optimization problem trivially infeasible in a
        way the solvers cannot express; reject it here instead.
        """
        if self.grid.shape != (margins.m, margins.n):
            raise LengthMismatch(
                f"mask shape {self.grid.shape} != margins shape "
                f"({margins.m}, {margins.n})"
            )
        row_open = self.grid.sum(axis=1)
        col_open = self.grid.sum(axis=0)
        for i, r in enumerate(margins.rows):
            if r > 0 and row_open[i] == 0:
                raise BadMargins(f"row {i} has positive sum {r} but no permitted cell")
        for j, c in enumerate(margins.cols):
            if c > 0 and col_open[j] == 0:
                raise BadMargins(
                    f"column {j} has positive sum {c} but no permitted cell"
                )

    def __eq__(self, other):
        return isinstance(other, CellMask) and np.array_equal(self.grid, other.grid)

    def __repr__(self):
        return f"CellMask({self.to_strings()!r})"


def validate_margins(rows: Iterable, cols: Iterable) -> Margins:
    """Validate raw row/column sums and return an immutable Margins value.

    Parameters
    ----------
    rows, cols : iterables of integers
        Prospective margin vectors.

    Raises
    ------
    NegativeEntry
        An entry is negative or not an integer.
    LengthMismatch
        A vector is empty.
    Unbalanced
        The two vectors have different totals.
    """
    return Margins(tuple(rows), tuple(cols))


def gale_ryser_feasible(margins: Margins) -> bool:
    """Decide whether any zero-one matrix realizes the given margins.

    The criterion: with the column sums sorted in non-increasing order
    c_(1) >= ... >= c_(n), a realization exists iff for every k = 1..n

        sum_i min(r_i, k)  >=  c_(1) + ... + c_(k).

    Entries exceeding the opposite dimension (r_i > n or c_j > m) make the
    instance trivially infeasible and are rejected up front.  Runs in
    O((m + n) log(m + n)) time.
    """
    m, n = margins.m, margins.n
    if any(r > n for r in margins.rows) or any(c > m for c in margins.cols):
        return False
    cols_desc = sorted(margins.cols, reverse=True)
    prefix = 0
    for k in range(1, n + 1):
        prefix += cols_desc[k - 1]
        if sum(min(r, k) for r in margins.rows) < prefix:
            return False
    return True


def dominates(stronger: Sequence[int], weaker: Sequence[int]) -> bool:
    """Majorization test: does `stronger` dominate `weaker`?

    Both vectors are sorted in non-increasing order; domination requires
    every prefix sum of `stronger` to be >= the corresponding prefix sum
    of `weaker`, with equal totals.  Vectors must have the same length.
    """
    if len(stronger) != len(weaker):
        raise LengthMismatch(
            f"cannot compare vectors of lengths {len(stronger)} and {len(weaker)}"
        )
    a = sorted(stronger, reverse=True)
    b = sorted(weaker, reverse=True)
    if sum(a) != sum(b):
        return False
    pa = pb = 0
    for x, y in zip(a, b):
        pa += x
        pb += y
        if pa < pb:
            return False
    return True


def clone_margins(margins: Margins, k: int) -> Margins:
    """Build the k-fold clone: each margin r_i becomes k copies of k * r_i.

    The clone is a (km) x (kn) instance with total k^2 * N.  Its maximum
    entropy matrix is the k x k block replication of the original one, and
    the gap between independence heuristics and true counts is amplified
    under cloning, which makes the construction the standard stress test
    for those heuristics.
    """
    if k < 1:
        raise OutOfRange(f"clone factor must be >= 1, got {k}")
    rows = tuple(k * r for r in margins.rows for _ in range(k))
    cols = tuple(k * c for c in margins.cols for _ in range(k))
    return Margins(rows, cols)
