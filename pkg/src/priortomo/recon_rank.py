"""
Reconstruction from noiseless statistics.

* :func:`reconstruct_rank_r` -- factored gradient descent over
  ``rho = V V^dagger / tr(V V^dagger)`` with ``V`` a ``d x r`` complex
  matrix, so every iterate has rank at most ``r``.  For a scheme that is
  informationally complete on rank-``r`` states, a zero-misfit point is *the*
  answer, so any start that drives the misfit to zero may be accepted.
* :func:`linear_inversion` -- the unconstrained baseline for schemes that
  span the whole operator space.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from .core import herm_to_real, is_psd, real_to_herm
from .opsys import ObservableSet, Povm

__all__ = [
    "ReconstructionResult",
    "misfit",
    "misfit_and_gradient",
    "reconstruct_rank_r",
    "linear_inversion",
    "NonPsdWarning",
]

CONVERGENCE_TOL = 1e-8


class NonPsdWarning(UserWarning):
    """Linear inversion produced a Hermitian matrix with negative eigenvalues."""


@dataclass(frozen=True)
class ReconstructionResult:
    state: np.ndarray = field(repr=False)
    residual: float
    starts_used: int
    converged: bool
    iterations: int = 0


def _ops(a) -> np.ndarray:
    if isinstance(a, Povm):
        return a.effects
    if isinstance(a, ObservableSet):
        return a.observables
    raise TypeError(f"expected Povm or ObservableSet, got {type(a).__name__}")


def _state(v: np.ndarray) -> np.ndarray:
    g = v @ v.conj().T
    return g / np.trace(g).real


def misfit(ops: np.ndarray, probs: np.ndarray, v: np.ndarray) -> float:
    """``sum_j (tr(rho A_j) - p_j)^2`` for ``rho = V V^dagger / tr(V V^dagger)``."""
    q = np.einsum("kl,jlk->j", _state(v), ops).real
    return float(np.sum((q - probs) ** 2))


def misfit_and_gradient(ops: np.ndarray, probs: np.ndarray, v: np.ndarray) -> tuple[float, np.ndarray]:
    """Misfit and its gradient with respect to ``V``.

    With ``s = tr(V V^dagger)``, ``q_j = tr(A_j V V^dagger) / s`` and
    ``g_j = 2 (q_j - p_j)``, the gradient (as the complex matrix
    ``dF/dRe V + i dF/dIm V``) is ``2 sum_j g_j (A_j - q_j I) V / s``.
    """
    s = np.vdot(v, v).real
    av = ops @ v  # (n, d, r)
    q = np.einsum("dr,jdr->j", v.conj(), av).real / s
    res = q - probs
    g = 2 * res
    grad = 2 * (np.tensordot(g, av, axes=1) - (g @ q) * v) / s
    return float(res @ res), grad


def _descend(ops, probs, v, max_iters: int, tol: float) -> tuple[np.ndarray, float, int]:
    """Gradient descent with Barzilai-Borwein trial steps and Armijo backtracking."""
    f, g = misfit_and_gradient(ops, probs, v)
    step = 1.0
    it = 0
    for it in range(1, max_iters + 1):
        if np.sqrt(f) <= tol:
            break
        gg = np.vdot(g, g).real
        if gg == 0:
            break
        t = step
        while True:
            v_new = v - t * g
            f_new, g_new = misfit_and_gradient(ops, probs, v_new)
            if f_new <= f - 1e-4 * t * gg or t < 1e-16:
                break
            t *= 0.5
        dv, dg = v_new - v, g_new - g
        denom = np.vdot(dv, dg).real
        step = np.vdot(dv, dv).real / denom if denom > 0 else 2 * t
        # keep the scale of V near 1 (the objective is scale invariant)
        nv = np.linalg.norm(v_new)
        v, f, g = v_new / nv, f_new, g_new * nv
        step /= nv * nv
    return v, float(np.sqrt(f)), it


def _polish(ops, probs, v) -> tuple[np.ndarray, float]:
    """Levenberg-Marquardt on the residuals ``q_j - p_j`` from a converged factor.

    Gradient descent stalls linearly near the solution; for a zero-residual
    problem a Gauss-Newton type polish reaches round-off in a few steps.
    """
    d, r = v.shape

    def unpack(z):
        return (z[: d * r] + 1j * z[d * r :]).reshape(d, r)

    def fun(z):
        w = unpack(z)
        s = np.vdot(w, w).real
        return np.einsum("dr,jdr->j", w.conj(), ops @ w).real / s - probs

    def jac(z):
        w = unpack(z)
        s = np.vdot(w, w).real
        aw = ops @ w
        q = np.einsum("dr,jdr->j", w.conj(), aw).real / s
        dv = 2 * (aw - q[:, None, None] * w) / s
        return np.hstack([dv.real.reshape(len(ops), -1), dv.imag.reshape(len(ops), -1)])

    z0 = np.concatenate([v.real.ravel(), v.imag.ravel()])
    method = "lm" if len(ops) >= len(z0) else "trf"  # lm needs m >= n
    out = least_squares(fun, z0, jac=jac, method=method, xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=200)
    return unpack(out.x), float(np.linalg.norm(out.fun))


def _check_probs(a, probs) -> np.ndarray:
    probs = np.asarray(probs, dtype=float).ravel()
    n = len(_ops(a))
    if probs.shape != (n,):
        raise ValueError(f"expected {n} values, got {probs.shape[0]}")
    if isinstance(a, Povm):
        if np.any(probs < -1e-9) or abs(probs.sum() - 1) > 1e-8:
            raise ValueError("probabilities must be nonnegative and sum to 1")
    return probs


def reconstruct_rank_r(
    a,
    probs,
    r: int,
    max_starts: int = 16,
    max_iters: int = 5000,
    seed=0,
    tol: float = CONVERGENCE_TOL,
) -> ReconstructionResult:
    """State of rank ``<= r`` reproducing the given statistics.

    Starts are Gaussian ``d x r`` factors scaled to unit trace, drawn from
    substream ``i`` of ``seed`` for start ``i``; the first start reaching a
    residual (Euclidean statistics misfit) ``<= tol`` is returned.  If none
    does, the best attempt is returned with ``converged=False``.  A converged
    start is refined by a short Levenberg-Marquardt polish so the returned
    residual is usually at round-off level.

    Raises
    ------
    ValueError
        ``probs`` has the wrong length or (for a POVM) is not a probability
        vector; ``r`` is out of range.
    """
    ops = _ops(a)
    d = ops.shape[1]
    if not 1 <= r <= d:
        raise ValueError(f"need 1 <= r <= d, got r={r}")
    probs = _check_probs(a, probs)
    best = None
    total_iters = 0
    for i, child in enumerate(np.random.SeedSequence(seed).spawn(max_starts), start=1):
        rng = np.random.default_rng(child)
        v = rng.standard_normal((d, r)) + 1j * rng.standard_normal((d, r))
        v /= np.linalg.norm(v)
        v, res, its = _descend(ops, probs, v, max_iters, tol)
        total_iters += its
        if best is None or res < best[1]:
            best = (v, res)
        if res <= tol:
            pv, pres = _polish(ops, probs, v)
            if pres < res:
                v, res = pv, pres
            return ReconstructionResult(_state(v), res, i, True, total_iters)
    return ReconstructionResult(_state(best[0]), best[1], max_starts, False, total_iters)


def linear_inversion(a, probs, tol: float = 1e-10) -> np.ndarray:
    """Unique Hermitian ``rho`` with ``tr(rho A_j) = p_j`` for a spanning scheme.

    Solved by least squares in real Hermitian coordinates.  For an
    observable set the trace-one condition is appended as an extra equation.
    A result with negative eigenvalues (perturbed input) is returned but
    flagged with :class:`NonPsdWarning`.

    Raises
    ------
    ValueError
        The scheme does not span the full operator space.
    """
    ops = _ops(a)
    d = ops.shape[1]
    probs = np.asarray(probs, dtype=float).ravel()
    if probs.shape != (len(ops),):
        raise ValueError(f"expected {len(ops)} values, got {probs.shape[0]}")
    rows = herm_to_real(ops)
    if isinstance(a, ObservableSet):
        rows = np.vstack([rows, herm_to_real(np.eye(d))])
        probs = np.append(probs, 1.0)
    s = np.linalg.svd(rows, compute_uv=False)
    if np.sum(s > tol * s[0]) < d * d:
        raise ValueError("scheme does not span the full operator space")
    coef = np.linalg.lstsq(rows, probs, rcond=None)[0]
    rho = real_to_herm(coef, d)
    if not is_psd(rho, 1e-9):
        warnings.warn("linear inversion result is not positive semidefinite", NonPsdWarning, stacklevel=2)
    return rho
