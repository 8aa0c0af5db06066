"""
Three real quadratic observables are not enough
===============================================

For real qutrit states the map x -> (x1 x2, x2 x3, x3 x1) has the Roman
surface as its image.  The surface crosses itself, so two different states
share the same three expectation values; adding x1^2 - x2^2 separates them.
"""

from pathlib import Path

import numpy as np

from priortomo.jsonio import points_to_csv
from priortomo.pure import real_projective_scheme, roman_collision_search, roman_map, roman_surface_points

points = roman_surface_points(4000)
out = Path("roman_surface.csv")
out.write_text(points_to_csv(points))
print(f"wrote {len(points)} points to {out}")

# %%
# A local search finds two unit vectors, not related by sign, with the same
# image.
x, y = roman_collision_search(rng_seed=0)
print("x =", np.round(x, 6))
print("y =", np.round(y, 6))
print("|R(x) - R(y)| = %.1e" % np.linalg.norm(roman_map(x) - roman_map(y)))

# %%
# The fourth observable of the real projective scheme tells them apart.
ops = real_projective_scheme().observables.real
print("<x1^2 - x2^2>:", x @ ops[3] @ x, "vs", y @ ops[3] @ y)
