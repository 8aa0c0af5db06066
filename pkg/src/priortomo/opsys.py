"""
POVMs, observable sets and operator systems.

Conversions between the three descriptions of a measurement scheme:

* an operator system is generated by a single POVM with ``dim`` outcomes
  (:func:`povm_from_operator_system`);
* ``n - 1`` observables and an ``n``-outcome POVM are interchangeable as far
  as informational completeness goes (:func:`povm_from_observables`,
  :func:`observables_from_povm`).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (
    DEFAULT_TOL,
    DimensionError,
    OperatorSubspace,
    as_hermitian,
    as_matrix,
    herm_to_real,
    op_norm,
    orthogonal_complement,
    split_positive,
    split_selfadjoint,
)

__all__ = [
    "Povm",
    "ObservableSet",
    "span_of_povm",
    "span_of_scheme",
    "povm_from_operator_system",
    "povm_from_complement",
    "povm_from_observables",
    "observables_from_povm",
    "statistics",
    "random_operator_system",
]


def _stack(mats) -> np.ndarray:
    arr = np.asarray(mats, dtype=complex)
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise DimensionError(f"expected a stack of square matrices, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class Povm:
    """Finite-outcome POVM.

    Effects are validated on construction: each must be PSD and together they
    must sum to the identity (Frobenius residual at most ``tol``).  A single
    effect ``{I}`` is accepted and marked ``degenerate``.
    """

    effects: np.ndarray = field(repr=False)
    tol: float = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        eff = _stack(self.effects)
        herm = np.array([as_hermitian(e, self.tol) for e in eff]).reshape(eff.shape)
        if len(herm) == 0:
            raise ValueError("POVM needs at least one effect")
        mins = np.linalg.eigvalsh(herm)[:, 0]
        if np.any(mins < -self.tol * np.maximum(1.0, np.linalg.norm(herm, axis=(1, 2)))):
            raise ValueError(f"POVM effect not PSD (min eigenvalue {mins.min():.3e})")
        d = herm.shape[1]
        resid = np.linalg.norm(herm.sum(axis=0) - np.eye(d))
        if resid > self.tol:
            raise ValueError(f"POVM effects do not sum to identity (residual {resid:.3e})")
        object.__setattr__(self, "effects", herm)

    @property
    def dim_space(self) -> int:
        return self.effects.shape[1]

    @property
    def n_outcomes(self) -> int:
        return len(self.effects)

    @property
    def degenerate(self) -> bool:
        return self.n_outcomes == 1

    def __len__(self) -> int:
        return self.n_outcomes

    def sum_residual(self) -> float:
        return float(np.linalg.norm(self.effects.sum(axis=0) - np.eye(self.dim_space)))

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.effects)[:, 0].min())


@dataclass(frozen=True)
class ObservableSet:
    """Ordered list of Hermitian observables whose expectations are recorded."""

    observables: np.ndarray = field(repr=False)
    tol: float = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        obs = _stack(self.observables)
        herm = np.array([as_hermitian(o, self.tol) for o in obs]).reshape(obs.shape)
        object.__setattr__(self, "observables", herm)

    @property
    def dim_space(self) -> int:
        return self.observables.shape[1]

    def __len__(self) -> int:
        return len(self.observables)


def _operators(scheme) -> np.ndarray:
    if isinstance(scheme, Povm):
        return scheme.effects
    if isinstance(scheme, ObservableSet):
        return scheme.observables
    raise TypeError(f"expected Povm or ObservableSet, got {type(scheme).__name__}")


def span_of_povm(a: Povm) -> OperatorSubspace:
    """Operator system spanned by the effects of ``a``."""
    return OperatorSubspace.from_span(a.effects)


def span_of_scheme(scheme) -> OperatorSubspace:
    """Span of a POVM, or of an observable set with the identity adjoined."""
    ops = _operators(scheme)
    if isinstance(scheme, ObservableSet):
        ops = np.concatenate([ops, np.eye(scheme.dim_space)[None]])
    return OperatorSubspace.from_span(ops)


def _positive_basis(s: OperatorSubspace, tol: float = 1e-10) -> list[np.ndarray]:
    """Greedy positive basis ``E_1..E_m`` of ``s``, identity excluded.

    Candidates are generated in basis order: each element is split into
    Hermitian parts and each Hermitian part into two positive parts.  A
    candidate is kept when it raises the (real) rank of the selected set,
    which starts out as ``{I}``.
    """
    d = s.dim_space
    chosen_real = [herm_to_real(np.eye(d))]
    out: list[np.ndarray] = []
    target = s.dim - 1
    for b in s.basis:
        if len(out) == target:
            break
        for h in split_selfadjoint(b):
            if np.linalg.norm(h) <= tol:
                continue
            for p in split_positive(h):
                if len(out) == target or np.linalg.norm(p) <= tol:
                    continue
                trial = np.array(chosen_real + [herm_to_real(p)])
                sv = np.linalg.svd(trial, compute_uv=False)
                if sv[-1] > tol * sv[0]:
                    chosen_real.append(trial[-1])
                    out.append(p)
    if len(out) != target:
        raise ArithmeticError(f"found {len(out)} positive basis elements, expected {target}")
    return out


def povm_from_operator_system(s: OperatorSubspace) -> Povm:
    """POVM with exactly ``dim s`` outcomes spanning the operator system ``s``.

    The positive basis ``{E_1, ..., E_m, I}`` is rescaled to
    ``A_j = E_j / (m ||E_j||)`` and completed by ``A_{m+1} = I - sum_j A_j``.
    For ``s = span{I}`` the result is the degenerate one-effect POVM ``{I}``.

    Raises
    ------
    ValueError
        If ``s`` is not an operator system.
    """
    if not (s.contains_identity and s.is_adjoint_closed):
        raise ValueError("subspace is not an operator system (needs identity and adjoint closure)")
    d = s.dim_space
    es = _positive_basis(s)
    m = len(es)
    if m == 0:
        return Povm(np.eye(d)[None])
    effects = [e / (m * op_norm(e)) for e in es]
    last = np.eye(d) - np.sum(effects, axis=0)
    return Povm(np.array(effects + [last]))


def povm_from_complement(mats) -> Povm:
    """POVM whose span is the orthogonal complement of ``span(mats)``.

    ``mats`` must span a traceless adjoint-closed subspace so that its
    complement is an operator system.
    """
    b = OperatorSubspace.from_span(mats)
    return povm_from_operator_system(orthogonal_complement(b))


def povm_from_observables(obs: ObservableSet) -> Povm:
    """POVM with ``len(obs) + 1`` outcomes carrying the same information.

    Each nonzero observable becomes ``(I/2 + S/(2||S||)) / (n-1)``.  A zero
    observable carries no information and is mapped to a zero effect, which
    keeps effect ``j`` aligned with observable ``j``.
    """
    ops = obs.observables
    k = len(ops)
    if k == 0:
        raise ValueError("observable set is empty")
    d = obs.dim_space
    eye = np.eye(d)
    effects = []
    for s in ops:
        nrm = op_norm(s)
        if nrm <= DEFAULT_TOL:
            effects.append(np.zeros((d, d), complex))
        else:
            effects.append((eye / 2 + s / (2 * nrm)) / k)
    effects.append(eye - np.sum(effects, axis=0))
    return Povm(np.array(effects))


def observables_from_povm(a: Povm) -> ObservableSet:
    """Drop the last effect; the remaining ``n-1`` effects determine it."""
    return ObservableSet(a.effects[:-1])


def statistics(scheme, rho) -> np.ndarray:
    """Outcome probabilities / expectation values ``Re tr(rho A_j)``.

    ``rho`` may be a single ``(d, d)`` matrix or a stack ``(k, d, d)``; for a
    stack the result has shape ``(k, n)``.
    """
    ops = _operators(scheme)
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim == 2:
        as_matrix(rho)
    if rho.shape[-1] != ops.shape[-1] or rho.shape[-2] != ops.shape[-2]:
        raise DimensionError(f"state dimension {rho.shape[-1]} != scheme dimension {ops.shape[-1]}")
    return np.einsum("...kl,jlk->...j", rho, ops).real


def random_operator_system(d: int, dim: int, rng_seed=None) -> OperatorSubspace:
    """Random operator system of the given dimension (``1 <= dim <= d**2``).

    Spanned by the identity, random non-Hermitian matrices paired with their
    adjoints, and (to fill an odd remainder) one random Hermitian matrix.
    """
    if not 1 <= dim <= d * d:
        raise ValueError(f"dimension must lie in [1, {d * d}], got {dim}")
    rng = np.random.default_rng(rng_seed)
    mats = [np.eye(d, dtype=complex)]
    while len(mats) + 2 <= dim:
        x = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        mats += [x, x.conj().T]
    if len(mats) < dim:
        h = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        mats.append(h + h.conj().T)
    s = OperatorSubspace.from_span(mats)
    if s.dim != dim:
        raise ArithmeticError("random operator system lost dimension")
    return s
