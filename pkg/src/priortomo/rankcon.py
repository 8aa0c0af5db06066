"""
Measurements that identify states of bounded rank.

The construction builds a traceless, adjoint-closed subspace ``B`` of
``(d - 2r)**2`` matrices whose nonzero elements all have rank at least
``2r + 1``.  Differences of two rank-``r`` states have rank at most ``2r``,
so none of them lies in ``B``; any POVM spanning the complement of ``B``
therefore separates rank-``r`` states and has ``4r(d - r)`` outcomes.

Diagonals are labelled from the lower-left corner: diagonal ``k`` (1-based)
holds the entries with ``i - j = d - k``, so the main diagonal is diagonal
``d`` and diagonal ``k`` has ``min(k, 2d - k)`` entries.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .bounds import rank_upper
from .core import OperatorSubspace, orthogonal_complement
from .opsys import Povm, povm_from_operator_system

__all__ = [
    "RankWitnessSubspace",
    "vandermonde_tns",
    "vandermonde_inverse_row",
    "diagonal_index",
    "build_rank_witness_subspace",
    "rank_constrained_povm",
    "min_outcome_bound_rank",
    "sample_min_rank",
    "top_diagonal_support",
]

MAX_RANKCON_DIM = 16
WARN_RANKCON_DIM = 10


def vandermonde_tns(m: int, alphas=None) -> np.ndarray:
    """Vandermonde matrix ``M[i, j] = alpha_i ** j`` with increasing positive nodes.

    With ``0 < alpha_1 < ... < alpha_m`` every minor is strictly positive, so
    the matrix is totally nonsingular.  The default nodes are ``1, ..., m``.
    """
    if m < 1:
        raise ValueError("m must be positive")
    if alphas is None:
        alphas = np.arange(1, m + 1, dtype=float)
    alphas = np.asarray(alphas, dtype=float)
    if alphas.shape != (m,):
        raise ValueError(f"need {m} nodes, got {alphas.shape}")
    if alphas[0] <= 0 or np.any(np.diff(alphas) <= 0):
        raise ValueError("nodes must be positive and strictly increasing")
    return np.vander(alphas, m, increasing=True)


def _check_range(d: int, r: int) -> None:
    if not (isinstance(d, (int, np.integer)) and isinstance(r, (int, np.integer))):
        raise TypeError("d and r must be integers")
    if not (1 <= r and 2 * r < d):
        raise ValueError(f"need 1 <= r < d/2, got d={d}, r={r}")
    if d > MAX_RANKCON_DIM:
        raise ValueError(f"d={d} exceeds the supported maximum {MAX_RANKCON_DIM} (Vandermonde conditioning)")
    if d > WARN_RANKCON_DIM:
        warnings.warn(
            f"d={d}: Vandermonde generators are poorly conditioned beyond d={WARN_RANKCON_DIM}",
            RuntimeWarning,
            stacklevel=3,
        )


def diagonal_index(d: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Row and column indices (0-based) of diagonal ``k`` in a d x d matrix."""
    off = d - k  # i - j
    if off >= 0:
        rows = np.arange(off, d)
        return rows, rows - off
    cols = np.arange(-off, d)
    return cols + off, cols


def vandermonde_inverse_row(alphas, i: int = -1) -> np.ndarray:
    """Row ``i`` of the inverse Vandermonde matrix, default the last one.

    The last row holds the leading coefficients of the Lagrange basis
    polynomials, ``1 / prod_{j != i} (alpha_i - alpha_j)``; this closed form
    stays accurate where a numerical inverse does not.  Other rows come from
    ``numpy.linalg.inv``.
    """
    alphas = np.asarray(alphas, dtype=float)
    m = len(alphas)
    if i in (-1, m - 1):
        diff = alphas[:, None] - alphas[None, :]
        np.fill_diagonal(diff, 1.0)
        return 1.0 / np.prod(diff, axis=1)
    return np.linalg.inv(np.vander(alphas, m, increasing=True))[i]


def _null_vector(alphas, n_used: int) -> np.ndarray:
    """Vector orthogonal to the first ``n_used`` Vandermonde columns, no zero entries.

    Row ``i`` of the inverse is orthogonal to every column but column ``i``;
    rows are tried from the last one backwards.
    """
    m = len(alphas)
    for i in range(m - 1, n_used - 1, -1):
        u = vandermonde_inverse_row(alphas, i)
        if np.all(np.abs(u) > 1e-12 * np.abs(u).max()):
            return u
    raise ArithmeticError("no inverse row without zero entries")


def _poly_block(nodes: np.ndarray, n: int) -> np.ndarray:
    """Chebyshev polynomials of degree < n at the (rescaled) nodes.

    Spans the same space as the first ``n`` Vandermonde columns, with far
    better conditioning; used only to orthonormalize.
    """
    lo, hi = nodes[0], nodes[-1]
    t = np.zeros_like(nodes) if hi == lo else (2 * nodes - lo - hi) / (hi - lo)
    return np.polynomial.chebyshev.chebvander(t, n - 1)


@dataclass(frozen=True)
class RankWitnessSubspace:
    """Spanning matrices of the rank witness subspace and their orthonormal span.

    ``generators`` keeps the raw construction; ``labels`` records, for each
    generator, the diagonal it lives on (``d`` for the traceless diagonal
    block).
    """

    dim_space: int
    rank_bound: int
    generators: np.ndarray = field(repr=False)
    labels: tuple[int, ...] = field(repr=False)
    subspace: OperatorSubspace = field(repr=False)

    @property
    def dim(self) -> int:
        return self.subspace.dim


def build_rank_witness_subspace(d: int, r: int) -> RankWitnessSubspace:
    """Build the ``(d - 2r)**2``-dimensional subspace of rank >= 2r+1 matrices.

    For ``k = 2r+1, ..., d-1`` the first ``k - 2r`` columns of the ``k x k``
    Vandermonde matrix are laid along diagonal ``k`` (below the main one) and,
    transposed, along diagonal ``2d - k``.  The main diagonal receives the
    entrywise products ``v_j * u`` of the first ``d - 2r`` columns of the
    ``d x d`` Vandermonde matrix with a vector ``u`` orthogonal to all of
    them, which makes those diagonal generators traceless.
    """
    _check_range(d, r)
    gens, labels, basis = [], [], []

    def place(col: np.ndarray, k: int) -> np.ndarray:
        g = np.zeros((d, d), complex)
        rows, cols = diagonal_index(d, k)
        g[rows, cols] = col
        return g

    def add_group(block: np.ndarray, stable: np.ndarray, ks: tuple[int, ...]) -> None:
        # groups live on disjoint diagonals, so orthonormalizing each block
        # separately yields an orthonormal basis of the whole span
        q, rr = np.linalg.qr(stable / np.linalg.norm(stable, axis=0))
        if np.abs(np.diag(rr)).min() < 1e-13:
            raise ArithmeticError("generator block is numerically rank deficient")
        for k in ks:
            for j in range(block.shape[1]):
                gens.append(place(block[:, j], k))
                labels.append(k)
                basis.append(place(q[:, j], k))

    for k in range(2 * r + 1, d):
        n = k - 2 * r
        add_group(vandermonde_tns(k)[:, :n], _poly_block(np.arange(1, k + 1.0), n), (k, 2 * d - k))
    nodes = np.arange(1, d + 1, dtype=float)
    n = d - 2 * r
    u = _null_vector(nodes, n)
    add_group(vandermonde_tns(d, nodes)[:, :n] * u[:, None], _poly_block(nodes, n) * u[:, None], (d,))
    gens = np.array(gens)
    sub = OperatorSubspace._with_flags(d, np.array(basis))
    expected = (d - 2 * r) ** 2
    if sub.dim != expected:
        raise ArithmeticError(f"witness subspace has dim {sub.dim}, expected {expected}")
    return RankWitnessSubspace(d, r, gens, tuple(labels), sub)


def rank_constrained_povm(d: int, r: int) -> Povm:
    """POVM with ``4r(d - r)`` outcomes separating all states of rank <= r."""
    w = build_rank_witness_subspace(d, r)
    osys = orthogonal_complement(w.subspace)
    return povm_from_operator_system(osys)


def min_outcome_bound_rank(d: int, r: int) -> int:
    """Upper bound ``4r(d - r) - 1`` on the number of observables needed."""
    return rank_upper(d, r)


def sample_min_rank(w: RankWitnessSubspace, n_samples: int, rng, tol: float = 1e-8) -> int:
    """Smallest numeric rank among random unit-norm complex combinations."""
    rng = np.random.default_rng(rng)
    k = w.dim
    c = rng.standard_normal((n_samples, k)) + 1j * rng.standard_normal((n_samples, k))
    c /= np.linalg.norm(c, axis=1, keepdims=True)
    mats = np.einsum("sb,bij->sij", c, w.subspace.basis)
    s = np.linalg.svd(mats, compute_uv=False)
    ranks = np.sum(s > tol * np.maximum(1.0, s[:, :1]), axis=1)
    return int(ranks.min())


def top_diagonal_support(m: np.ndarray, tol: float = 1e-12) -> tuple[int, int]:
    """Label of the highest nonzero diagonal and its number of nonzero entries."""
    d = m.shape[0]
    scale = max(1.0, np.abs(m).max())
    for k in range(2 * d - 1, 0, -1):
        rows, cols = diagonal_index(d, k)
        vals = m[rows, cols]
        nz = int(np.sum(np.abs(vals) > tol * scale))
        if nz:
            return k, nz
    return 0, 0
