"""
Informational-completeness verdicts.

A scheme ``A`` fails to separate two states exactly when their difference
lies in the orthogonal complement ``A^perp`` of its span.  The functions here
turn that observation into verdicts:

* :func:`pair_criterion` -- do two given states give equal statistics?
* :func:`rank_ic_criterion` / :func:`pure_ic_rank_criterion` -- does the
  complement contain a selfadjoint element of rank ``<= 2r`` (which would
  split into two indistinguishable rank-``r`` states)?  Certified for
  complements of dimension 0 and 1, sampled (multistart minimization)
  otherwise.
* :func:`qutrit_classify` -- the complete classification for ``d = 3``.
* :func:`mane_experiment`, :func:`sampled_separation` -- empirical
  injectivity of random / given schemes on random premise pairs.

Verdicts are collected in an :class:`IcReport`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.linalg import eigvals
from scipy.optimize import brentq, minimize

from .bounds import minkowski_dim
from .core import (
    DimensionError,
    OperatorSubspace,
    as_hermitian,
    hermitian_basis,
    hs_norm,
    numeric_rank,
    orthogonal_complement,
    random_hermitian,
)
from .opsys import ObservableSet, Povm, span_of_scheme, statistics
from .premise import Premise, random_premise_pairs, random_premise_state

__all__ = [
    "Premise",
    "Verdict",
    "IcReport",
    "QutritClass",
    "QutritClassification",
    "random_premise_state",
    "complement_of_scheme",
    "pair_criterion",
    "witness_from_element",
    "indistinguishable_pair",
    "rank_ic_criterion",
    "pure_ic_rank_criterion",
    "find_singular_combination",
    "qutrit_classify",
    "random_povm",
    "random_observables",
    "separation_ratios",
    "sampled_separation",
    "mane_experiment",
]

WITNESS_TOL = 1e-10
SEARCH_THRESHOLD = 1e-6


class Verdict(str, enum.Enum):
    CERTIFIED = "Certified"
    REFUTED = "Refuted"
    SAMPLED_PASS = "SampledPass"
    SAMPLED_FAIL = "SampledFail"

    @property
    def ok(self) -> bool:
        return self in (Verdict.CERTIFIED, Verdict.SAMPLED_PASS)


@dataclass(frozen=True)
class IcReport:
    """Outcome of an informational-completeness check.

    ``witness`` is a pair of states with equal statistics (for ``Refuted``
    and, when one was found, ``SampledFail``).  ``min_separation_ratio`` is
    the smallest ``|Delta stats| / |Delta rho|_HS`` seen, or ``nan`` when no
    sampling took place.
    """

    verdict: Verdict
    witness: tuple[np.ndarray, np.ndarray] | None = field(default=None, repr=False)
    trials: int = 0
    min_separation_ratio: float = float("nan")
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.verdict.ok

    def to_dict(self) -> dict:
        from .jsonio import matrix_to_json

        out = {
            "verdict": self.verdict.value,
            "trials": self.trials,
            "min_separation_ratio": None if np.isnan(self.min_separation_ratio) else self.min_separation_ratio,
            "details": self.details,
        }
        if self.witness is not None:
            out["witness"] = [matrix_to_json(w) for w in self.witness]
        return out


# -- complement-based criteria ------------------------------------------------


def complement_of_scheme(a) -> OperatorSubspace:
    """Orthogonal complement of the scheme's span.

    For an :class:`ObservableSet` the identity is adjoined first, since its
    expectation value (the trace) is the same for every state.
    """
    return orthogonal_complement(span_of_scheme(a))


def pair_criterion(a, rho1, rho2, tol: float = WITNESS_TOL) -> bool:
    """True iff ``a`` gives ``rho1`` and ``rho2`` the same statistics.

    Decided by the norm of the projection of ``rho1 - rho2`` onto the span of
    the scheme (identity included for observable sets).
    """
    rho1 = np.asarray(rho1, dtype=complex)
    rho2 = np.asarray(rho2, dtype=complex)
    span = span_of_scheme(a)
    if rho1.shape != rho2.shape or rho1.shape != (span.dim_space,) * 2:
        raise DimensionError(f"state shapes {rho1.shape}, {rho2.shape} do not match d={span.dim_space}")
    return bool(np.linalg.norm(span.project(rho1 - rho2)) <= tol)


def _eig_by_magnitude(t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    w, v = np.linalg.eigh(t)
    order = np.argsort(-np.abs(w), kind="stable")
    return w[order], v[:, order]


def witness_from_element(t, max_rank: int = 2, tol: float = 1e-9) -> tuple[np.ndarray, np.ndarray]:
    """Split a traceless element of rank ``<= max_rank`` into two states.

    Non-Hermitian input is replaced by ``t + t^dagger`` (or ``i(t - t^dagger)``
    when that vanishes).  The positive and negative parts ``P``, ``N`` have
    equal trace; ``P / tr P`` and ``N / tr N`` are states of rank at most
    ``max_rank / 2`` whose difference is proportional to ``t``.  Eigenvalues
    below ``tol`` relative to the largest are dropped.
    """
    t = np.asarray(t, dtype=complex)
    h = t + t.conj().T
    if np.linalg.norm(h) <= tol * max(1.0, np.linalg.norm(t)):
        h = 1j * (t - t.conj().T)
    if np.linalg.norm(h) == 0:
        raise ValueError("zero element has no witness")
    h = h / np.linalg.norm(h)
    if abs(np.trace(h)) > 1e-8:
        raise ValueError(f"element is not traceless (trace {np.trace(h).real:.3e})")
    w, v = _eig_by_magnitude(h)
    keep = np.abs(w) > tol * np.abs(w[0])
    if keep.sum() > max_rank:
        raise ValueError(f"element has rank {int(keep.sum())} > {max_rank}")
    pos = keep & (w > 0)
    neg = keep & (w < 0)
    if not pos.any() or not neg.any():
        raise ValueError("traceless element must have both signs")
    p = (v[:, pos] * w[pos]) @ v[:, pos].conj().T
    n = (v[:, neg] * -w[neg]) @ v[:, neg].conj().T
    return p / np.trace(p).real, n / np.trace(n).real


def indistinguishable_pair(t, tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Two pure states whose difference is proportional to ``t``.

    ``t`` must be Hermitian, traceless and of rank 2, so that
    ``t / lam = P1 - P2`` with rank-one projections ``P1``, ``P2``
    (a traceless selfadjoint operator cannot have rank one).
    """
    t = as_hermitian(t, tol)
    scale = max(1.0, np.linalg.norm(t))
    if abs(np.trace(t)) > tol * scale:
        raise ValueError("t must be traceless")
    rank = numeric_rank(t, 1e-9)
    if rank != 2:
        raise ValueError(f"t must have rank 2, got {rank}")
    w, v = _eig_by_magnitude(t)
    i_pos = 0 if w[0] > 0 else 1
    p1, p2 = v[:, i_pos], v[:, 1 - i_pos]
    return np.outer(p1, p1.conj()), np.outer(p2, p2.conj())


def _tail_objective(herm: np.ndarray, keep: int):
    """``f(c) = sum_{i >= keep} lam_i(T)^2 / |c|^2`` with ``T = sum c_j H_j``.

    Eigenvalues are ordered by magnitude, so ``f`` vanishes exactly on
    elements of rank ``<= keep``.  The gradient uses
    ``d lam_i / d c_j = v_i^dagger H_j v_i``.
    """

    def fun(c):
        nc2 = c @ c
        t = np.tensordot(c, herm, axes=1)
        w, v = _eig_by_magnitude(t)
        tw, tv = w[keep:], v[:, keep:]
        g = tw @ tw
        # d g / d c_j = 2 sum_i lam_i <v_i|H_j|v_i>
        dg = 2 * np.einsum("i,ki,jkl,li->j", tw, tv.conj(), herm, tv).real
        return g / nc2, dg / nc2 - 2 * g * c / nc2**2

    return fun


def _sigma_tail(t: np.ndarray, keep: int) -> float:
    s = np.linalg.svd(t / np.linalg.norm(t), compute_uv=False)
    return float(s[keep]) if keep < len(s) else 0.0


def _polish_low_rank(herm: np.ndarray, c: np.ndarray, keep: int, iters: int = 5000) -> np.ndarray:
    """Alternating projections between rank-``keep`` matrices and the span."""
    c = c / np.linalg.norm(c)
    for _ in range(iters):
        t = np.tensordot(c, herm, axes=1)
        if _sigma_tail(t, keep) < 1e-14:
            break
        w, v = _eig_by_magnitude(t)
        low = (v[:, :keep] * w[:keep]) @ v[:, :keep].conj().T
        c = np.einsum("jkl,lk->j", herm, low).real
        c /= np.linalg.norm(c)
    return c


def rank_ic_criterion(
    complement: OperatorSubspace,
    r: int = 1,
    search_budget: int = 64,
    rng_seed=0,
) -> IcReport:
    """Informational completeness with respect to states of rank ``<= r``.

    The scheme separates such states iff every nonzero selfadjoint element of
    the complement has rank at least ``2r + 1``.  Complements of dimension 0
    and 1 are decided exactly.  Larger ones are searched: ``search_budget``
    quasi-Newton runs from random starts minimize the normalized energy of
    the eigenvalues beyond the ``2r`` largest.  If the best element has
    ``(2r+1)``-th singular value (unit HS norm) above ``1e-6`` the verdict is
    ``SampledPass``; otherwise the element is polished to exact low rank and
    split into a witness pair (``Refuted``), or ``SampledFail`` if the polish
    does not reach a witness with equal statistics.
    """
    if not complement.is_adjoint_closed:
        raise ValueError("complement must be adjoint-closed")
    if r < 1:
        raise ValueError("r must be >= 1")
    d = complement.dim_space
    keep = 2 * r
    if complement.dim == 0:
        return IcReport(Verdict.CERTIFIED, details={"complement_dim": 0})
    herm = hermitian_basis(complement)
    if complement.dim == 1:
        t = herm[0]
        rank = numeric_rank(t, 1e-9)
        details = {"complement_dim": 1, "generator_rank": rank}
        if rank > keep:
            return IcReport(Verdict.CERTIFIED, details=details)
        return IcReport(Verdict.REFUTED, witness=witness_from_element(t, keep), details=details)

    rng = np.random.default_rng(rng_seed)
    fun = _tail_objective(herm, keep)
    best_c, best_s = None, np.inf
    for _ in range(search_budget):
        c0 = rng.standard_normal(len(herm))
        res = minimize(fun, c0 / np.linalg.norm(c0), jac=True, method="BFGS", options={"gtol": 1e-12, "maxiter": 500})
        s = _sigma_tail(np.tensordot(res.x, herm, axes=1), keep)
        if s < best_s:
            best_c, best_s = res.x, s
        if best_s <= SEARCH_THRESHOLD:
            break
    details = {"complement_dim": complement.dim, "starts": search_budget, "min_tail_singular_value": best_s}
    if best_s > SEARCH_THRESHOLD:
        return IcReport(Verdict.SAMPLED_PASS, trials=search_budget, details=details)

    c = _polish_low_rank(herm, best_c, keep)
    t = np.tensordot(c, herm, axes=1)
    details["polished_tail_singular_value"] = _sigma_tail(t, keep)
    try:
        pair = witness_from_element(t, keep, tol=1e-9)
    except ValueError:
        return IcReport(Verdict.SAMPLED_FAIL, trials=search_budget, details=details)
    # equal statistics means the difference lies in the complement
    resid = float(np.linalg.norm(complement.residual(pair[0] - pair[1])))
    details["witness_residual"] = resid
    verdict = Verdict.REFUTED if resid <= WITNESS_TOL else Verdict.SAMPLED_FAIL
    return IcReport(verdict, witness=pair if verdict is Verdict.REFUTED else None, trials=search_budget, details=details)


def pure_ic_rank_criterion(complement: OperatorSubspace, search_budget: int = 64, rng_seed=0) -> IcReport:
    """Informational completeness for pure states: no rank-2 selfadjoint element."""
    return rank_ic_criterion(complement, 1, search_budget, rng_seed)


# -- qutrits -----------------------------------------------------------------


def find_singular_combination(x, y, return_t: bool = False, tol: float = 1e-9):
    """Unit-norm singular matrix on the real pencil ``t x + (1 - t) y``.

    When ``d`` is odd the signs of ``x`` and ``y`` are flipped so that
    ``det x > 0 > det y``; the determinant then changes sign on ``(0, 1)``
    and the root is bracketed.  Otherwise (or if no sign change is
    available) the real roots of ``det(y + t (x - y))`` are taken from the
    generalized eigenvalues of the pencil.

    Raises
    ------
    ValueError
        ``x`` and ``y`` are linearly dependent, or the pencil has no real
        singular point.
    """
    x = as_hermitian(x)
    y = as_hermitian(y)
    if x.shape != y.shape:
        raise DimensionError("x and y must have the same shape")
    d = x.shape[0]
    if np.linalg.matrix_rank(np.stack([x.ravel(), y.ravel()]), tol=tol * max(hs_norm(x), hs_norm(y))) < 2:
        raise ValueError("x and y are linearly dependent")

    def unit(m):
        return m / hs_norm(m)

    for m, t0 in ((x, 1.0), (y, 0.0)):
        if numeric_rank(m, tol) < d:
            return (unit(m), t0) if return_t else unit(m)

    if d % 2 == 1:
        xs = x if np.linalg.det(x).real > 0 else -x
        ys = y if np.linalg.det(y).real < 0 else -y

        def det(t):
            return np.linalg.det(t * xs + (1 - t) * ys).real

        t0 = brentq(det, 0.0, 1.0, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
        m = t0 * xs + (1 - t0) * ys
        return (unit(m), t0) if return_t else unit(m)

    ts = eigvals(y, -(x - y))
    ts = ts[np.isfinite(ts)]
    real = ts[np.abs(ts.imag) <= 1e-9 * np.maximum(1.0, np.abs(ts))].real
    if real.size == 0:
        raise ValueError("the pencil contains no singular matrix")
    inside = real[(real > 0) & (real < 1)]
    t0 = float(inside[0] if inside.size else real[np.argmin(np.abs(real - 0.5))])
    m = t0 * x + (1 - t0) * y
    return (unit(m), t0) if return_t else unit(m)


class QutritClass(str, enum.Enum):
    FULL_IC = "FullIC"
    PURE_IC_RANK_ONE = "PureIcRankOne"
    NOT_PURE_IC = "NotPureIC"


@dataclass(frozen=True)
class QutritClassification:
    """Class of a qutrit POVM.

    ``generator`` is the Hermitian complement generator for
    ``PureIcRankOne``; ``witness`` a pair of pure states with equal
    statistics for ``NotPureIC``.
    """

    kind: QutritClass
    complement_dim: int
    generator: np.ndarray | None = field(default=None, repr=False)
    witness: tuple[np.ndarray, np.ndarray] | None = field(default=None, repr=False)


def qutrit_classify(a: Povm) -> QutritClassification:
    """Classify a qutrit POVM by its complement.

    * dimension 0: informationally complete for all states;
    * dimension 1 spanned by an invertible ``T``: complete for pure states
      only;
    * otherwise: not complete for pure states, with a witness pair built
      from a rank-2 element of the complement (for dimension >= 2 that
      element comes from :func:`find_singular_combination`).
    """
    if a.dim_space != 3:
        raise DimensionError(f"qutrit classification needs d = 3, got {a.dim_space}")
    comp = complement_of_scheme(a)
    if comp.dim == 0:
        return QutritClassification(QutritClass.FULL_IC, 0)
    herm = hermitian_basis(comp)
    if comp.dim == 1:
        t = herm[0]
        if numeric_rank(t, 1e-9) == 3:
            return QutritClassification(QutritClass.PURE_IC_RANK_ONE, 1, generator=t)
        singular = t
    else:
        singular = find_singular_combination(herm[0], herm[1])
    pair = indistinguishable_pair(_truncate(singular, 2), tol=1e-8)
    return QutritClassification(QutritClass.NOT_PURE_IC, comp.dim, witness=pair)


def _truncate(t: np.ndarray, rank: int) -> np.ndarray:
    w, v = _eig_by_magnitude(as_hermitian(t, 1e-8))
    return (v[:, :rank] * w[:rank]) @ v[:, :rank].conj().T


# -- random schemes and sampled separation -----------------------------------


def random_povm(d: int, n: int, rng_seed=None) -> Povm:
    """Random ``n``-outcome POVM: ``S^{-1/2} G_j S^{-1/2}`` with Wishart ``G_j``."""
    rng = np.random.default_rng(rng_seed)
    g = rng.standard_normal((n, d, d)) + 1j * rng.standard_normal((n, d, d))
    g = g @ g.conj().transpose(0, 2, 1)
    w, v = np.linalg.eigh(g.sum(axis=0))
    s = (v / np.sqrt(w)) @ v.conj().T
    eff = s @ g @ s
    eff = (eff + eff.conj().transpose(0, 2, 1)) / 2
    # absorb round-off so the effects sum to the identity exactly
    eff[-1] += np.eye(d) - eff.sum(axis=0)
    return Povm(eff)


def random_observables(d: int, m: int, rng_seed=None) -> ObservableSet:
    """``m`` independent Hermitized complex Gaussian matrices ``(G + G^dagger)/2``."""
    return ObservableSet(random_hermitian(d, np.random.default_rng(rng_seed), size=m))


def separation_ratios(a, rho1: np.ndarray, rho2: np.ndarray) -> np.ndarray:
    """``|stats(rho1) - stats(rho2)| / |rho1 - rho2|_HS`` for stacks of states."""
    dstats = statistics(a, rho1) - statistics(a, rho2)
    drho = np.linalg.norm((rho1 - rho2).reshape(len(rho1), -1), axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.linalg.norm(dstats, axis=-1) / drho


def sampled_separation(a, premise: Premise, n_pairs: int, rng_seed=0, threshold: float = 1e-8) -> IcReport:
    """Empirical check on ``n_pairs`` random premise pairs (pair ``i`` uses substream ``i``)."""
    if span_of_scheme(a).dim_space != premise.dim:
        raise DimensionError("scheme and premise dimensions differ")
    r1, r2 = random_premise_pairs(premise, n_pairs, rng_seed)
    ratios = separation_ratios(a, r1, r2)
    i = int(np.nanargmin(ratios))
    ratio = float(ratios[i])
    verdict = Verdict.SAMPLED_PASS if ratio > threshold else Verdict.SAMPLED_FAIL
    witness = (r1[i], r2[i]) if verdict is Verdict.SAMPLED_FAIL else None
    return IcReport(verdict, witness=witness, trials=n_pairs, min_separation_ratio=ratio, details={"premise": premise.spec()})


def mane_experiment(premise: Premise, m: int, n_pairs: int, rng_seed=0) -> IcReport:
    """Random-observable injectivity experiment.

    Draws ``m`` Gaussian Hermitian observables and reports the minimum
    separation ratio over ``n_pairs`` random premise pairs; ``SampledPass``
    if it exceeds ``1e-8``.  Whether ``m > 2 D`` (``D`` the box dimension of
    the premise), the regime where almost every choice is guaranteed to
    work, is recorded in ``details``.
    """
    if not isinstance(premise, Premise):
        raise TypeError("premise must be a Premise")
    if m < 1 or n_pairs < 1:
        raise ValueError("m and n_pairs must be positive")
    obs_seed, pair_seed = np.random.SeedSequence(rng_seed).spawn(2)
    obs = random_observables(premise.dim, m, obs_seed)
    rep = sampled_separation(obs, premise, n_pairs, pair_seed)
    dim = minkowski_dim(premise)
    details = dict(rep.details, m=m, minkowski_dim=dim, generic_regime=bool(m > 2 * dim))
    return IcReport(rep.verdict, rep.witness, rep.trials, rep.min_separation_ratio, details)
