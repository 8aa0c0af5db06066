"""
Pure-state measurement schemes.

* :func:`james_observables` -- ``4d - 5`` anti-diagonal observables that
  separate all pure states, together with :func:`reconstruct_pure_state`,
  which turns their expectation values back into a state vector.
* :func:`real_projective_scheme` -- four observables separating real pure
  qutrit states; dropping the diagonal one leaves the three quadratic
  monomials whose image is the (self-intersecting) Roman surface.
* :func:`counterexample_mixed_pure` -- a pure and a mixed qutrit state that
  a pure-state complete scheme cannot tell apart.

Indices in docstrings are 1-based to match the usual matrix notation; the
arrays are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares, minimize

from .core import as_hermitian, numeric_rank, spectral_decompose
from .opsys import ObservableSet

__all__ = [
    "JamesScheme",
    "NotPureStateError",
    "james_observables",
    "c_gamma",
    "james_expectations",
    "reconstruct_pure_state",
    "canonical_phase",
    "real_projective_scheme",
    "roman_map",
    "roman_surface_points",
    "roman_collision_search",
    "counterexample_mixed_pure",
]


class NotPureStateError(ValueError):
    """Expectation values are not those of any pure state."""


@dataclass(frozen=True)
class JamesScheme:
    """``X_1 .. X_{2d-2}`` and ``Y_1 .. Y_{2d-3}``.

    ``X_a`` has ones on the anti-diagonal ``k + l = a + 1``; ``Y_b`` lives on
    ``k + l = b + 2`` with ``+i`` below and ``-i`` above the diagonal.
    """

    dim_space: int
    x_ops: np.ndarray = field(repr=False)
    y_ops: np.ndarray = field(repr=False)

    @property
    def observables(self) -> ObservableSet:
        return ObservableSet(np.concatenate([self.x_ops, self.y_ops]))

    def __len__(self) -> int:
        return len(self.x_ops) + len(self.y_ops)


def _anti(d: int, s: int) -> tuple[np.ndarray, np.ndarray]:
    """0-based (k, l) with 1-based ``k + l = s``."""
    k = np.arange(max(1, s - d), min(d, s - 1) + 1)
    return k - 1, s - k - 1


def james_observables(d: int) -> JamesScheme:
    if d < 2:
        raise ValueError("d must be >= 2")
    xs = np.zeros((2 * d - 2, d, d), complex)
    for a in range(1, 2 * d - 1):
        k, l = _anti(d, a + 1)
        xs[a - 1, k, l] = 1
    ys = np.zeros((2 * d - 3, d, d), complex)
    for b in range(1, 2 * d - 2):
        k, l = _anti(d, b + 2)
        ys[b - 1, k, l] = np.where(k > l, 1j, np.where(k < l, -1j, 0))
    return JamesScheme(d, xs, ys)


def c_gamma(d: int, gamma: int) -> np.ndarray:
    """Upper-triangular auxiliary matrix ``C_gamma``, ``2 <= gamma <= 2d``.

    ``C_{2d}`` is the identity.  Otherwise the entries are 1 on
    ``k + l = gamma`` strictly above the diagonal, ``1/2`` at
    ``k = l = gamma/2`` and zero elsewhere.
    """
    if not 2 <= gamma <= 2 * d:
        raise ValueError(f"gamma must lie in [2, {2 * d}], got {gamma}")
    if gamma == 2 * d:
        return np.eye(d, dtype=complex)
    c = np.zeros((d, d), complex)
    k, l = _anti(d, gamma)
    upper = k < l
    c[k[upper], l[upper]] = 1
    if gamma % 2 == 0:
        c[gamma // 2 - 1, gamma // 2 - 1] = 0.5
    return c


def james_expectations(x) -> np.ndarray:
    """Expectations ``<x|S_j|x>`` of a vector (or stack of vectors), X first."""
    x = np.asarray(x, dtype=complex)
    d = x.shape[-1]
    s = james_observables(d)
    ops = np.concatenate([s.x_ops, s.y_ops])
    return np.einsum("...k,jkl,...l->...j", x.conj(), ops, x).real


def canonical_phase(x, tol: float = 1e-12) -> np.ndarray:
    """Normalize and rotate so the first nonzero amplitude is real positive."""
    x = np.asarray(x, dtype=complex)
    nrm = np.linalg.norm(x)
    if nrm == 0:
        raise ValueError("zero vector has no phase")
    x = x / nrm
    nz = np.flatnonzero(np.abs(x) > tol)
    if nz.size == 0:
        raise ValueError("zero vector has no phase")
    lead = x[nz[0]]
    x = x * (abs(lead) / lead)
    x[nz[0]] = abs(lead)  # exactly real, free of rotation round-off
    return x


def _polish(x: np.ndarray, e: np.ndarray, lead: int) -> np.ndarray:
    """Levenberg-Marquardt refinement of the recursive estimate.

    The recursion divides by the leading amplitude, so round-off grows when
    it is small.  The polish solves ``<x|S_j|x> = e_j``, ``|x| = 1`` and
    ``Im x_lead = 0`` in least squares, starting from the recursive solution.
    """
    d = len(x)
    ops = np.concatenate([james_observables(d).x_ops, james_observables(d).y_ops])

    def unpack(z):
        return z[:d] + 1j * z[d:]

    def fun(z):
        v = unpack(z)
        f = np.einsum("k,jkl,l->j", v.conj(), ops, v).real - e
        return np.concatenate([f, [np.vdot(v, v).real - 1, v[lead].imag]])

    def jac(z):
        v = unpack(z)
        sv = ops @ v
        j = np.empty((len(e) + 2, 2 * d))
        j[: len(e), :d] = 2 * sv.real
        j[: len(e), d:] = 2 * sv.imag
        j[len(e), :d] = 2 * v.real
        j[len(e), d:] = 2 * v.imag
        j[len(e) + 1] = 0
        j[len(e) + 1, d + lead] = 1
        return j

    x = x * (abs(x[lead]) / x[lead]) if x[lead] != 0 else x
    z0 = np.concatenate([x.real, x.imag])
    if np.linalg.norm(fun(z0)) < 1e-14:
        return x
    res = least_squares(fun, z0, jac=jac, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15)
    return unpack(res.x)


def reconstruct_pure_state(
    expectations,
    d: int | None = None,
    zero_threshold: float = 1e-12,
    tol: float = 1e-9,
) -> np.ndarray:
    """Recover the state vector from noiseless anti-diagonal expectations.

    The values ``v_g = <x|C_g|x>`` are assembled from the X/Y expectations.
    The first index ``n < d`` with ``v_{2n}`` above ``zero_threshold`` marks
    the first nonzero amplitude, ``x_n = sqrt(2 v_{2n})`` (if there is none,
    the state is the last basis vector); every further
    amplitude follows from a single linear equation:

        v_{m+n+1} = conj(x_n) x_{m+1} + (terms in x_1 .. x_m),

    solved for ``m = n, ..., d - 1``.  The identity ``C_{2d}`` is never
    consulted; the result is normalized instead.  Because every step divides
    by ``x_n``, round-off grows when that amplitude is small; the estimate is
    therefore refined by a short least-squares polish on the forward map.

    Parameters
    ----------
    expectations : array_like, length ``4d - 5``
        ``<X_1>, ..., <X_{2d-2}>, <Y_1>, ..., <Y_{2d-3}>``.
    d : int, optional
        Hilbert space dimension; inferred from the length when omitted.

    Returns
    -------
    numpy.ndarray
        Unit vector with canonical global phase.

    Raises
    ------
    NotPureStateError
        The recovered vector does not reproduce the input within ``tol``.
    """
    e = np.asarray(expectations, dtype=float).ravel()
    if d is None:
        if (len(e) + 5) % 4:
            raise ValueError(f"{len(e)} values do not match any 4d - 5")
        d = (len(e) + 5) // 4
    if d < 2 or len(e) != 4 * d - 5:
        raise ValueError(f"expected {4 * d - 5} expectation values for d={d}, got {len(e)}")
    ex, ey = e[: 2 * d - 2], e[2 * d - 2 :]

    # v[g] for g = 2 .. 2d-1
    v = np.zeros(2 * d, complex)
    v[2] = ex[0] / 2
    for g in range(3, 2 * d):
        v[g] = (ex[g - 2] + 1j * ey[g - 3]) / 2

    n = next((j for j in range(1, d) if v[2 * j].real > zero_threshold), d)
    x = np.zeros(d, complex)
    # n == d: only the last amplitude survives and the norm fixes it
    x[n - 1] = np.sqrt(2 * v[2 * n].real) if n < d else 1.0
    for m in range(n, d):
        g = m + n + 1
        # known part: pairs (k, l), k < l, k + l = g, n < k, plus the diagonal
        known = 0j
        for k in range(n + 1, g):
            l = g - k
            if l <= k:
                break
            known += x[k - 1].conj() * x[l - 1]
        if g % 2 == 0:
            known += 0.5 * abs(x[g // 2 - 1]) ** 2
        x[m] = (v[g] - known) / x[n - 1]

    nrm = np.linalg.norm(x)
    if not np.isfinite(nrm) or nrm == 0:
        raise NotPureStateError("reconstruction produced a degenerate vector")
    x = canonical_phase(_polish(x / nrm, e, n - 1))
    resid = np.linalg.norm(james_expectations(x) - e)
    if resid > tol * max(1.0, np.linalg.norm(e)):
        raise NotPureStateError(f"expectations not realizable by a pure state (residual {resid:.3e})")
    return x


def real_projective_scheme() -> ObservableSet:
    """Four qutrit observables with ``<x|S|x> = (x1 x2, x2 x3, x3 x1, x1^2 - x2^2)``."""
    s = np.zeros((4, 3, 3), complex)
    for j, (a, b) in enumerate([(0, 1), (1, 2), (2, 0)]):
        s[j, a, b] = s[j, b, a] = 0.5
    s[3] = np.diag([1.0, -1.0, 0.0])
    return ObservableSet(s)


def roman_map(x) -> np.ndarray:
    """``(x1 x2, x2 x3, x3 x1)`` for a real 3-vector or a stack of them."""
    x = np.asarray(x, dtype=float)
    return np.stack([x[..., 0] * x[..., 1], x[..., 1] * x[..., 2], x[..., 2] * x[..., 0]], axis=-1)


def _fibonacci_sphere(n: int) -> np.ndarray:
    i = np.arange(n) + 0.5
    z = 1 - 2 * i / n
    rad = np.sqrt(np.clip(1 - z * z, 0, None))
    phi = np.pi * (3 - np.sqrt(5)) * np.arange(n)
    return np.stack([rad * np.cos(phi), rad * np.sin(phi), z], axis=1)


def roman_surface_points(n_samples: int) -> np.ndarray:
    """Roman surface point cloud from a spherical Fibonacci lattice, shape ``(n, 3)``."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    return roman_map(_fibonacci_sphere(n_samples))


def roman_collision_search(n_starts: int = 32, rng_seed=0, tol: float = 1e-8, min_gap: float = 1e-2):
    """Local search for real unit vectors ``x != +-y`` with equal Roman-map images.

    Minimizes ``|R(x) - R(y)|^2 / min(|x - y|^2, |x + y|^2)`` over pairs of
    unit vectors from random starts; the ratio vanishes only at genuine
    collisions, never at the trivial solutions ``y = +-x``.

    Returns
    -------
    (x, y) or None
        First pair found with ``|R(x) - R(y)| <= tol`` and
        ``min(|x - y|, |x + y|) >= min_gap``; ``None`` if none is found.
    """
    rng = np.random.default_rng(rng_seed)

    def split(z):
        x, y = z[:3], z[3:]
        return x / np.linalg.norm(x), y / np.linalg.norm(y)

    def fun(z):
        x, y = split(z)
        gap = min(np.sum((x - y) ** 2), np.sum((x + y) ** 2))
        return np.sum((roman_map(x) - roman_map(y)) ** 2) / max(gap, 1e-300)

    for _ in range(n_starts):
        res = minimize(fun, rng.standard_normal(6), method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-24, "maxiter": 4000})
        x, y = split(res.x)
        gap = min(np.linalg.norm(x - y), np.linalg.norm(x + y))
        if gap >= min_gap and np.linalg.norm(roman_map(x) - roman_map(y)) <= tol:
            return x, y
    return None


def counterexample_mixed_pure(t, tol: float = 1e-9) -> tuple[np.ndarray, np.ndarray]:
    """Pure/mixed qutrit pair differing by a multiple of ``t``.

    ``t`` must be an invertible traceless Hermitian 3x3 matrix.  Written as
    ``l1 P1 - l2 P2 - l3 P3`` (negated if needed so that exactly one
    eigenvalue is positive), it yields the pure state ``P1`` and the mixed
    state ``(l2 P2 + l3 P3) / l1``, whose difference is ``t / l1``.
    """
    t = as_hermitian(t, tol)
    if t.shape != (3, 3):
        raise ValueError("t must be 3x3")
    if abs(np.trace(t)) > tol * max(1.0, np.linalg.norm(t)):
        raise ValueError("t must be traceless")
    if numeric_rank(t, tol) != 3:
        raise ValueError("t must be invertible")
    w = np.linalg.eigvalsh(t)
    npos = int(np.sum(w > 0))
    if npos == 2:
        t = -t
    elif npos != 1:
        raise ValueError("t has the wrong signature")
    pairs = spectral_decompose(t)
    l1, v1 = pairs[0]
    p1 = np.outer(v1, v1.conj())
    rho = sum((-lam) * np.outer(v, v.conj()) for lam, v in pairs[1:]) / l1
    return p1, rho
