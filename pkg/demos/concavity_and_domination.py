"""Structural inequalities of the margin-count function.

Two checks, both with exact counts:

* log-concavity on mixtures: the count at averaged margins should beat
  the weighted geometric mean of the counts, up to a proven slack term;
* domination monotonicity: spreading the same totals more unevenly
  (majorization on rows and on columns) can only shrink the class.
"""

from margincount import (
    Margins,
    dominates,
    domination_monotonicity_check,
    log_concavity_check,
)

# midpoint of two margin pairs on the same 3x3 shape
a = Margins((3, 2, 1), (2, 2, 2))
b = Margins((1, 2, 3), (2, 2, 2))
items = [(a, 0.5), (b, 0.5)]

for mode in ("zero-one", "nonneg"):
    rep = log_concavity_check(items, mode)
    print(f"{mode}: lhs {rep.lhs_log:.4f} vs rhs {rep.rhs_log:.4f}"
          f"  slack {rep.precise_slack_log:.4f}")
    print(f"   bare inequality: {rep.holds_conjectured},"
          f" with slack: {rep.holds_precise}")

# the same machinery accepts any weights that sum to one, as long as
# the averaged margins are integers
triple = [(a, 0.25), (b, 0.25), (Margins((2, 2, 2), (2, 2, 2)), 0.5)]
rep = log_concavity_check(triple, "nonneg")
print("\nweighted triple, nonneg:", rep.holds_precise)

# cheap surrogate: replace exact counts by the max-entropy value when
# the instances are too large to count
rep = log_concavity_check(items, "nonneg", use_exact=False)
print("surrogate variant ran with exact =", rep.exact)

# domination: (3,2,0) spreads (2,2,1) more unevenly
weak = Margins((2, 2, 1), (2, 2, 1))
strong = Margins((3, 2, 0), (3, 2, 0))
print("\nrows dominate:", dominates(strong.rows, weak.rows))
for mode in ("zero-one", "nonneg"):
    print(f"count monotone under domination ({mode}):",
          domination_monotonicity_check(weak, strong, mode))
