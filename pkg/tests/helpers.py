"""Shared brute-force oracles and instance generators for the test suite.

The counting oracles here are deliberately naive (direct enumeration over
rows) and independent of the package's DP/permanent code paths, so
agreement between the two is meaningful evidence.
"""

from __future__ import annotations

import itertools

from margincount import Margins

# pass/fail verdict lines collected by the acceptance tests and printed by
# the terminal-summary hook in conftest.py
ACCEPTANCE_VERDICTS: list[str] = []


def record_verdict(num: int, name: str, ok: bool, detail: str = "") -> None:
    tail = f"  ({detail})" if detail else ""
    ACCEPTANCE_VERDICTS.append(
        f"criterion {num:2d} {name}: {'PASS' if ok else 'FAIL'}{tail}"
    )
    assert ok, f"criterion {num} ({name}) failed {tail}"


def balanced_pairs(max_dim: int, max_entry: int, positive: bool = False):
    """Every margin pair with 1 <= m, n <= max_dim and entries <= max_entry."""
    lo = 1 if positive else 0
    for m in range(1, max_dim + 1):
        rows_list = list(itertools.product(range(lo, max_entry + 1), repeat=m))
        for n in range(1, max_dim + 1):
            cols_list = list(itertools.product(range(lo, max_entry + 1), repeat=n))
            for rows in rows_list:
                for cols in cols_list:
                    if sum(rows) == sum(cols):
                        yield Margins(rows, cols)


def canonical(margins: Margins):
    """Sort both vectors; counts and bounds only depend on this key."""
    return (
        tuple(sorted(margins.rows, reverse=True)),
        tuple(sorted(margins.cols, reverse=True)),
    )


def brute_count_01(rows, cols) -> int:
    """|A0| by direct row-by-row enumeration (no shared code with the DP)."""
    n = len(cols)

    def rec(i, residual):
        if i == len(rows):
            return 1 if all(c == 0 for c in residual) else 0
        total = 0
        for ones in itertools.combinations(range(n), rows[i]):
            if all(residual[j] > 0 for j in ones):
                nxt = list(residual)
                for j in ones:
                    nxt[j] -= 1
                total += rec(i + 1, tuple(nxt))
        return total

    return rec(0, tuple(cols))


def _compositions(total, parts, caps):
    """All ways to split `total` into `parts` ordered amounts, amount k <= caps[k]."""
    if parts == 1:
        if total <= caps[0]:
            yield (total,)
        return
    for first in range(min(total, caps[0]) + 1):
        for rest in _compositions(total - first, parts - 1, caps[1:]):
            yield (first,) + rest


def brute_count_nonneg(rows, cols) -> int:
    """|A+| by direct row-by-row enumeration with column-residual caps."""
    n = len(cols)

    def rec(i, residual):
        if i == len(rows):
            return 1 if all(c == 0 for c in residual) else 0
        total = 0
        for row in _compositions(rows[i], n, list(residual)):
            nxt = tuple(residual[j] - row[j] for j in range(n))
            total += rec(i + 1, nxt)
        return total

    return rec(0, tuple(cols))


def brute_permanent(matrix) -> int:
    """Permanent by summation over explicit permutations (exact ints)."""
    k = len(matrix)
    total = 0
    for perm in itertools.permutations(range(k)):
        prod = 1
        for i in range(k):
            prod *= int(matrix[i][perm[i]])
            if prod == 0:
                break
        total += prod
    return total
