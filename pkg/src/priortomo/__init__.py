"""
priortomo -- measurement schemes for quantum states with prior information.

Submodules
----------
core        Hermitian linear algebra, operator subspaces and complements
opsys       POVMs, observable sets and operator-system conversions
premise     prior-information state sets and seeded sampling
rankcon     POVMs identifying states of bounded rank
pure        anti-diagonal pure-state scheme, real projective scheme, counterexamples
verify      informational-completeness verdicts and experiments
bounds      closed-form bounds on the minimal number of observables
recon_rank  reconstruction of low-rank states from statistics
jsonio      JSON / CSV interchange
cli         command-line entry point
"""

from .bounds import BoundReport, bound_report, pure_bound_table
from .core import OperatorSubspace, hermitian_basis, numeric_rank, orthogonal_complement
from .opsys import (
    ObservableSet,
    Povm,
    observables_from_povm,
    povm_from_observables,
    povm_from_operator_system,
    span_of_scheme,
    statistics,
)
from .premise import Premise, random_premise_state
from .pure import counterexample_mixed_pure, james_observables, reconstruct_pure_state
from .rankcon import build_rank_witness_subspace, rank_constrained_povm
from .recon_rank import linear_inversion, reconstruct_rank_r
from .verify import IcReport, Verdict, complement_of_scheme, pair_criterion, pure_ic_rank_criterion, qutrit_classify

__version__ = "0.1.0"
