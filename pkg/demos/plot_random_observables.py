"""
Random observables and generic injectivity
==========================================

Almost every choice of m observables separates a state set of box-counting
dimension D once m > 2D.  Here we watch the minimal separation ratio as m
grows for qutrit pure states (D = 4).
"""

from priortomo.premise import Premise
from priortomo.verify import mane_experiment

premise = Premise.pure(3)
for m in range(3, 11):
    rep = mane_experiment(premise, m, n_pairs=5000, rng_seed=m)
    print(
        f"m={m:2d}  min ratio={rep.min_separation_ratio:.3e}  "
        f"{rep.verdict.value:12s}  m > 2D: {rep.details['generic_regime']}"
    )

# %%
# Random pairs almost never land on a collision even when one exists: with
# m <= 2D a "SampledPass" only says that none of the sampled pairs collided.
# Below the pure-state minimum (7 observables for d = 3) collisions are
# guaranteed, but they form a set of measure zero among pairs.
