"""
Exact counting of matrices with prescribed margins
==================================================

A margin pair (R, C) fixes every row sum and every column sum.  This
script counts the 0-1 matrices and the non-negative integer matrices
that realize a few small margin pairs, and cross-checks the counting
DP against plain enumeration and against the permanent identity.
"""

from margincount import (
    CellMask,
    Margins,
    count_01,
    count_01_via_permanent,
    count_nonneg,
    enumerate_01,
    gale_ryser_feasible,
)

# the running example: 3x3, rows (2,2,1), cols (2,2,1), total 5
m = Margins((2, 2, 1), (2, 2, 1))
print("margins:", m.rows, m.cols, "total", m.total)
print("feasible as a 0-1 matrix:", gale_ryser_feasible(m))
print("0-1 matrices:", count_01(m))
print("non-negative integer matrices:", count_nonneg(m))

# the five 0-1 realizations, spelled out
for i, mat in enumerate(enumerate_01(m)):
    print(f"--- matrix {i + 1} ---")
    for row in mat:
        print("   ", " ".join(str(v) for v in row))

# an infeasible pair: (2,2,0) vs (3,1,0) fails the partial-sum test
bad = Margins((2, 2, 0), (3, 1, 0))
print("\n(2,2,0) x (3,1,0) feasible:", gale_ryser_feasible(bad))
print("enumeration finds", len(enumerate_01(bad)), "matrices")

# counts only depend on the multiset of margins, not their order
shuffled = Margins((1, 2, 2), (2, 1, 2))
print("\nshuffled margins give the same count:", count_01(shuffled))

# forbidding cells: diagonal-free 0-1 matrices with all margins 1
# are permutation matrices with no fixed point (derangements)
n = 3
ones = Margins((1,) * n, (1,) * n)
off_diag = CellMask([[i != j for j in range(n)] for i in range(n)])
print(f"\nderangements of {n} elements:", count_01(ones, mask=off_diag))

# the permanent route: |A0(R,C)| equals a permanent of a larger block
# matrix divided by margin factorials; exact integers all the way
print("\npermanent route agrees:", count_01_via_permanent(m) == count_01(m))

# counts grow quickly: doubling the margins
for k in (1, 2, 3, 4):
    mk = Margins((2 * k, 2 * k, k), (2 * k, 2 * k, k))
    print(f"k={k}: nonneg count {count_nonneg(mk)}")
