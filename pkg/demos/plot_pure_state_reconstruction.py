"""
Reading a pure state off anti-diagonal expectations
===================================================

4d - 5 observables, each supported on one anti-diagonal, determine a pure
state up to its global phase.  The amplitudes come back one at a time.
"""

import numpy as np

from priortomo.opsys import povm_from_observables
from priortomo.pure import james_expectations, james_observables, reconstruct_pure_state
from priortomo.verify import QutritClass, qutrit_classify

rng = np.random.default_rng(0)
d = 6
x = rng.standard_normal(d) + 1j * rng.standard_normal(d)
x /= np.linalg.norm(x)

scheme = james_observables(d)
print("number of observables:", len(scheme))

e = james_expectations(x)
x_hat = reconstruct_pure_state(e)
print("fidelity |<x, x_hat>|^2 = %.15f" % abs(np.vdot(x, x_hat)) ** 2)

# %%
# Leading zeros are handled: the first nonzero amplitude is located from the
# diagonal part of the data before the recursion starts.
y = x.copy()
y[:3] = 0
y /= np.linalg.norm(y)
print("with three leading zeros: %.15f" % abs(np.vdot(y, reconstruct_pure_state(james_expectations(y)))) ** 2)

# %%
# For a qutrit the scheme turns into an 8-outcome POVM whose orthogonal
# complement is spanned by one invertible operator -- the signature of a
# measurement that separates pure states but not mixed ones.
c = qutrit_classify(povm_from_observables(james_observables(3).observables))
assert c.kind is QutritClass.PURE_IC_RANK_ONE
print("complement generator eigenvalues:", np.round(np.linalg.eigvalsh(c.generator), 4))
