"""
How many observables does a pure state need?
=============================================

Lower and upper bounds on the smallest number of observables that separate
all pure states in dimension d, next to the 4d - 5 anti-diagonal scheme.
"""

import numpy as np

from priortomo.bounds import binary_ones, pure_bound_table

# The lower bound comes from non-embedding results for projective space; the
# upper bound is the smaller of the explicit construction (4d - 5) and a
# bilinear-map construction.  Where they meet, the minimum is known exactly.
table = pure_bound_table(30)
print(f"{'d':>3} {'lower':>6} {'upper':>6} {'4d-5':>6} {'exact':>6}")
for row in table:
    exact = "" if row.exact is None else row.exact
    print(f"{row.d:>3} {row.lower:>6} {row.upper:>6} {4 * row.d - 5:>6} {exact!s:>6}")

# %%
# The gap never exceeds the number of ones in the binary expansion of d - 1,
# which is at most log2(d).
gaps = np.array([r.upper - r.lower for r in table])
ones = np.array([binary_ones(r.d - 1) for r in table])
print("largest gap:", gaps.max(), " gap <= ones everywhere:", bool(np.all(gaps[6:] <= ones[6:])))
