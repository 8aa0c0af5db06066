"""
Dense complex matrix kernel.

Matrices are plain ``numpy`` arrays of shape ``(d, d)``; stacks of matrices
are arrays of shape ``(k, d, d)``.  Hilbert-Schmidt geometry, operator
subspaces, numeric rank and the two elementary splittings (into selfadjoint
and into positive parts) live here.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

__all__ = [
    "DEFAULT_TOL",
    "MAX_DIM",
    "DimensionError",
    "OperatorSubspace",
    "hs_inner",
    "hs_norm",
    "op_norm",
    "is_hermitian",
    "is_psd",
    "as_matrix",
    "as_hermitian",
    "as_state",
    "numeric_rank",
    "split_selfadjoint",
    "split_positive",
    "spectral_decompose",
    "orthogonal_complement",
    "hermitian_basis",
    "herm_to_real",
    "real_to_herm",
    "pure_state",
    "random_hermitian",
]

DEFAULT_TOL = 1e-9
MAX_DIM = 64


class DimensionError(ValueError):
    """Raised when matrix dimensions are incompatible."""


def as_matrix(m) -> np.ndarray:
    """Coerce to a finite square complex array."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] > MAX_DIM:
        raise DimensionError(f"dimension {a.shape[0]} exceeds supported maximum {MAX_DIM}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product ``tr(a^dagger b)``."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def hs_norm(a) -> float:
    return float(np.linalg.norm(a))


def op_norm(a) -> float:
    """Operator norm, i.e. the largest singular value."""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def _scale(a) -> float:
    return max(1.0, float(np.linalg.norm(a)))


def is_hermitian(m, tol: float = DEFAULT_TOL) -> bool:
    m = np.asarray(m)
    return bool(np.linalg.norm(m - m.conj().T) <= tol * _scale(m))


def is_psd(m, tol: float = DEFAULT_TOL) -> bool:
    m = np.asarray(m)
    if not is_hermitian(m, tol):
        return False
    w = np.linalg.eigvalsh((m + m.conj().T) / 2)
    return bool(w[0] >= -tol * _scale(m))


def as_hermitian(m, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Validate hermiticity and return the exactly symmetrized matrix."""
    m = as_matrix(m)
    if not is_hermitian(m, tol):
        raise ValueError("matrix is not Hermitian within tolerance")
    return (m + m.conj().T) / 2


def as_state(rho, rank: int | None = None, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Validate a density matrix: Hermitian, PSD, unit trace, optional rank bound."""
    rho = as_hermitian(rho, tol)
    if not is_psd(rho, tol):
        raise ValueError("state is not positive semidefinite")
    if abs(np.trace(rho).real - 1.0) > tol * _scale(rho):
        raise ValueError(f"state has trace {np.trace(rho).real!r}, expected 1")
    if rank is not None and numeric_rank(rho, tol) > rank:
        raise ValueError(f"state rank exceeds declared rank {rank}")
    return rho


def numeric_rank(m, tol: float = DEFAULT_TOL) -> int:
    """Number of singular values above ``tol * max(1, largest singular value)``."""
    s = np.linalg.svd(np.asarray(m, dtype=complex), compute_uv=False)
    if s.size == 0:
        return 0
    return int(np.sum(s > tol * max(1.0, s[0])))


def split_selfadjoint(x) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(h1, h2)`` Hermitian with ``x = h1 + 1j*h2``."""
    x = as_matrix(x)
    xh = x.conj().T
    return (x + xh) / 2, (x - xh) / 2j


def split_positive(h) -> tuple[np.ndarray, np.ndarray]:
    """Return PSD ``(p1, p2)`` with ``h = p1 - p2`` and ``p1 + p2 = ||h|| I``."""
    h = as_hermitian(h)
    eye = np.eye(h.shape[0])
    nrm = op_norm(h)
    return (nrm * eye + h) / 2, (nrm * eye - h) / 2


def spectral_decompose(h) -> list[tuple[float, np.ndarray]]:
    """Eigenpairs of a Hermitian matrix, eigenvalues in descending order."""
    h = as_hermitian(h)
    w, v = np.linalg.eigh(h)
    order = np.argsort(w)[::-1]
    return [(float(w[i]), v[:, i]) for i in order]


# -- real coordinates on Hermitian matrices ---------------------------------


def _herm_real_basis(d: int) -> np.ndarray:
    """HS-orthonormal real basis of d x d Hermitian matrices, shape (d*d, d, d)."""
    out = []
    for k in range(d):
        e = np.zeros((d, d), complex)
        e[k, k] = 1
        out.append(e)
    s = 1 / np.sqrt(2)
    for k in range(d):
        for l in range(k + 1, d):
            e = np.zeros((d, d), complex)
            e[k, l] = e[l, k] = s
            out.append(e)
            f = np.zeros((d, d), complex)
            f[k, l] = -1j * s
            f[l, k] = 1j * s
            out.append(f)
    return np.array(out)


_BASIS_CACHE: dict[int, np.ndarray] = {}


def _basis(d: int) -> np.ndarray:
    if d not in _BASIS_CACHE:
        _BASIS_CACHE[d] = _herm_real_basis(d)
        _BASIS_CACHE[d].setflags(write=False)
    return _BASIS_CACHE[d]


def herm_to_real(h) -> np.ndarray:
    """Isometric real coordinates of Hermitian matrices.

    Accepts a single matrix ``(d, d)`` or a stack ``(k, d, d)`` and returns
    vectors of length ``d*d``.  Non-Hermitian input is silently projected onto
    its Hermitian part.
    """
    h = np.asarray(h, dtype=complex)
    d = h.shape[-1]
    return np.einsum("bij,...ij->...b", _basis(d).conj(), h).real


def real_to_herm(v, d: int) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return np.einsum("...b,bij->...ij", v, _basis(d))


# -- subspaces ---------------------------------------------------------------


def _orthonormal_rows(rows: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal basis (as rows) of the row span, via SVD."""
    if rows.shape[0] == 0:
        return rows[:0]
    _, s, vh = np.linalg.svd(rows, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return rows[:0]
    k = int(np.sum(s > tol * max(1.0, s[0])))
    return vh[:k]


@dataclass(frozen=True)
class OperatorSubspace:
    """A complex subspace of d x d matrices with an HS-orthonormal basis.

    Build instances with :meth:`from_span`; the two flags are computed, never
    asserted by the caller.
    """

    dim_space: int
    basis: np.ndarray = field(repr=False)
    is_adjoint_closed: bool = False
    contains_identity: bool = False

    @classmethod
    def from_span(cls, mats, tol: float = 1e-10) -> "OperatorSubspace":
        mats = np.asarray(mats, dtype=complex)
        if mats.ndim == 2:
            mats = mats[None]
        if mats.ndim != 3 or mats.shape[1] != mats.shape[2]:
            raise DimensionError(f"expected a stack of square matrices, got {mats.shape}")
        d = mats.shape[1]
        rows = _orthonormal_rows(mats.reshape(len(mats), d * d), tol)
        basis = rows.reshape(-1, d, d)
        return cls._with_flags(d, basis)

    @classmethod
    def zero(cls, d: int) -> "OperatorSubspace":
        return cls(d, np.zeros((0, d, d), complex), True, False)

    @classmethod
    def full(cls, d: int) -> "OperatorSubspace":
        return cls._with_flags(d, _basis(d).copy())

    @classmethod
    def _with_flags(cls, d: int, basis: np.ndarray, tol: float = 1e-9) -> "OperatorSubspace":
        tmp = cls(d, basis)
        adj = bool(len(basis) == 0 or tmp.residual(basis.conj().transpose(0, 2, 1)).max() <= tol)
        ident = bool(len(basis) > 0 and tmp.residual(np.eye(d) / np.sqrt(d)).max() <= tol)
        return cls(d, basis, adj, ident)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return self.dim

    def project(self, m) -> np.ndarray:
        """Orthogonal projection of a matrix (or stack) onto the subspace."""
        m = np.asarray(m, dtype=complex)
        coef = np.einsum("bij,...ij->...b", self.basis.conj(), m)
        return np.einsum("...b,bij->...ij", coef, self.basis)

    def residual(self, m) -> np.ndarray:
        """Frobenius norm of the component orthogonal to the subspace."""
        m = np.asarray(m, dtype=complex)
        r = m - self.project(m)
        return np.atleast_1d(np.linalg.norm(r.reshape(*r.shape[:-2], -1), axis=-1))

    def contains(self, m, tol: float = 1e-10) -> bool:
        m = np.asarray(m, dtype=complex)
        return bool(np.all(self.residual(m) <= tol * np.maximum(1.0, np.linalg.norm(m))))

    def equals(self, other: "OperatorSubspace", tol: float = 1e-10) -> bool:
        """Span equality by mutual projection residuals."""
        if self.dim_space != other.dim_space or self.dim != other.dim:
            return False
        if self.dim == 0:
            return True
        return bool(
            self.residual(other.basis).max() <= tol and other.residual(self.basis).max() <= tol
        )

    def gram(self) -> np.ndarray:
        return np.einsum("aij,bij->ab", self.basis.conj(), self.basis)

    def hermitian_basis(self) -> np.ndarray:
        """HS-orthonormal Hermitian basis; requires adjoint closure."""
        return hermitian_basis(self)


def orthogonal_complement(s: OperatorSubspace, tol: float = 1e-10) -> OperatorSubspace:
    """HS-orthogonal complement of ``s`` in the d x d matrices.

    If ``s`` is adjoint-closed the returned basis consists of Hermitian
    matrices.
    """
    d = s.dim_space
    if s.dim == 0:
        return OperatorSubspace.full(d)
    if s.is_adjoint_closed:
        # work in real coordinates: the complement of an adjoint-closed space
        # is spanned by Hermitian matrices orthogonal to its Hermitian part
        hb = hermitian_basis(s)
        ns = scipy.linalg.null_space(herm_to_real(hb), rcond=tol)
        basis = real_to_herm(ns.T, d)
    else:
        a = s.basis.reshape(s.dim, d * d).conj()
        ns = scipy.linalg.null_space(a, rcond=tol)
        basis = ns.T.reshape(-1, d, d)
    if basis.shape[0] != d * d - s.dim:
        raise ArithmeticError("complement dimension mismatch; basis is ill-conditioned")
    return OperatorSubspace._with_flags(d, basis)


def hermitian_basis(s: OperatorSubspace, tol: float = 1e-10) -> np.ndarray:
    """Return an orthonormal Hermitian basis of an adjoint-closed subspace."""
    if not s.is_adjoint_closed:
        raise ValueError("subspace is not adjoint-closed")
    d = s.dim_space
    if s.dim == 0:
        return np.zeros((0, d, d), complex)
    h1 = (s.basis + s.basis.conj().transpose(0, 2, 1)) / 2
    h2 = (s.basis - s.basis.conj().transpose(0, 2, 1)) / 2j
    rows = herm_to_real(np.concatenate([h1, h2]))
    rows = _orthonormal_rows(rows, tol)
    if rows.shape[0] != s.dim:
        raise ArithmeticError("Hermitian part has unexpected dimension")
    return real_to_herm(rows, d)


# -- small constructors ------------------------------------------------------


def pure_state(psi) -> np.ndarray:
    """Projector onto the normalized vector ``psi``."""
    psi = np.asarray(psi, dtype=complex).ravel()
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def random_hermitian(d: int, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Hermitized complex Gaussian matrices ``(G + G^dagger)/2``."""
    shape = (d, d) if size is None else (size, d, d)
    g = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return (g + np.swapaxes(g, -1, -2).conj()) / 2
