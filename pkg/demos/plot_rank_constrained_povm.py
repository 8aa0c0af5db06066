"""
A POVM for states of bounded rank
=================================

Build the 4r(d - r)-outcome POVM that separates all states of rank at most r,
check it by sampling, and recover a state from its outcome probabilities.
"""

import numpy as np

from priortomo.opsys import statistics
from priortomo.premise import Premise, random_premise_pairs, random_premise_state
from priortomo.rankcon import build_rank_witness_subspace, rank_constrained_povm, sample_min_rank
from priortomo.recon_rank import reconstruct_rank_r
from priortomo.verify import separation_ratios

d, r = 6, 2

# %%
# The construction starts from a traceless subspace of dimension (d - 2r)^2
# in which every nonzero element has rank at least 2r + 1.  The POVM spans its
# orthogonal complement.
w = build_rank_witness_subspace(d, r)
print("witness subspace dimension:", w.dim)
print("smallest rank seen in 2000 random elements:", sample_min_rank(w, 2000, 0))

povm = rank_constrained_povm(d, r)
print("outcomes:", povm.n_outcomes, "= 4 r (d - r) =", 4 * r * (d - r))
print("sum residual %.1e, smallest eigenvalue %.1e" % (povm.sum_residual(), povm.min_eigenvalue()))

# %%
# Differences of rank-r states have rank at most 2r, so none of them lies in
# the witness subspace: distinct states give distinct statistics.
rho1, rho2 = random_premise_pairs(Premise.bounded_rank(d, r), 5000, rng_seed=1)
print("min |dp| / |drho| over 5000 pairs: %.3e" % separation_ratios(povm, rho1, rho2).min())

# %%
# Because the statistics determine the state, a factored least-squares fit
# that reaches zero residual must have found the true state.
target = random_premise_state(Premise.bounded_rank(d, r), 2)
res = reconstruct_rank_r(povm, statistics(povm, target), r, seed=0)
print("converged:", res.converged, " residual %.1e" % res.residual)
print("HS error: %.1e" % np.linalg.norm(res.state - target))
