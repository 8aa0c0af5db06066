"""Prior-information state sets and their sampling."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import as_state

__all__ = ["Premise", "random_premise_state", "random_premise_states", "random_premise_pairs"]

KINDS = ("pure", "rank", "realpure", "grassmann", "depolarized")


@dataclass(frozen=True)
class Premise:
    """Descriptor of the state set the unknown state is promised to lie in.

    ``kind`` is one of ``pure``, ``rank`` (rank at most ``rank``),
    ``realpure`` (pure with real amplitudes), ``grassmann`` (rank-``rank``
    projections divided by ``rank``) and ``depolarized`` (mixtures
    ``lam * sigma + (1 - lam) * pure``).
    """

    kind: str
    dim: int
    rank: int | None = None
    sigma: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown premise kind {self.kind!r}")
        if int(self.dim) != self.dim or self.dim < 2:
            raise ValueError(f"dimension must be >= 2, got {self.dim}")
        if self.kind in ("rank", "grassmann"):
            if self.rank is None or self.rank < 1:
                raise ValueError(f"{self.kind} premise needs rank >= 1")
            hi = self.dim if self.kind == "rank" else self.dim - 1
            if self.rank > hi:
                raise ValueError(f"rank {self.rank} out of range for {self.kind} premise in d={self.dim}")
        if self.kind == "depolarized":
            if self.sigma is None:
                raise ValueError("depolarized premise needs a state sigma")
            sig = as_state(self.sigma)
            if sig.shape[0] != self.dim:
                raise ValueError("sigma dimension does not match premise dimension")
            object.__setattr__(self, "sigma", sig)

    @classmethod
    def pure(cls, d: int) -> "Premise":
        return cls("pure", d)

    @classmethod
    def bounded_rank(cls, d: int, r: int) -> "Premise":
        return cls("rank", d, r)

    @classmethod
    def real_pure(cls, d: int = 3) -> "Premise":
        return cls("realpure", d)

    @classmethod
    def grassmann(cls, d: int, r: int) -> "Premise":
        return cls("grassmann", d, r)

    @classmethod
    def depolarized(cls, sigma) -> "Premise":
        sigma = np.asarray(sigma, dtype=complex)
        return cls("depolarized", sigma.shape[0], None, sigma)

    @classmethod
    def parse(cls, text: str, dim: int | None = None, sigma=None) -> "Premise":
        """Parse ``pure | realpure | rank:<r> | grassmann:<r> | depol:<file>``.

        For ``depol`` the caller loads the state file and passes it as
        ``sigma``; the dimension is then taken from it.
        """
        head, _, arg = text.partition(":")
        if head == "depol":
            if sigma is None:
                raise ValueError("depol premise needs a state")
            return cls.depolarized(sigma)
        if dim is None:
            raise ValueError(f"premise {text!r} needs a dimension")
        if head in ("pure", "realpure"):
            if arg:
                raise ValueError(f"premise {head!r} takes no argument")
            return cls(head, dim)
        if head in ("rank", "grassmann"):
            try:
                r = int(arg)
            except ValueError:
                raise ValueError(f"bad rank in premise {text!r}") from None
            return cls(head, dim, r)
        raise ValueError(f"unknown premise {text!r}")

    def spec(self) -> str:
        if self.kind in ("rank", "grassmann"):
            return f"{self.kind}:{self.rank}"
        if self.kind == "depolarized":
            return "depol"
        return self.kind


def _haar_vector(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def _sample(premise: Premise, rng: np.random.Generator) -> np.ndarray:
    d = premise.dim
    kind = premise.kind
    if kind == "pure":
        v = _haar_vector(d, rng)
        return np.outer(v, v.conj())
    if kind == "realpure":
        v = rng.standard_normal(d)
        v /= np.linalg.norm(v)
        return np.outer(v, v).astype(complex)
    if kind == "rank":
        r = premise.rank
        v = rng.standard_normal((d, r)) + 1j * rng.standard_normal((d, r))
        rho = v @ v.conj().T
        return rho / np.trace(rho).real
    if kind == "grassmann":
        r = premise.rank
        g = rng.standard_normal((d, r)) + 1j * rng.standard_normal((d, r))
        q, _ = np.linalg.qr(g)
        return q @ q.conj().T / r
    if kind == "depolarized":
        lam = rng.uniform()
        v = _haar_vector(d, rng)
        return lam * premise.sigma + (1 - lam) * np.outer(v, v.conj())
    raise ValueError(f"unsupported premise kind {kind!r}")


def _seed_sequence(seed) -> np.random.SeedSequence:
    return seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)


def random_premise_state(premise: Premise, rng_seed=None) -> np.ndarray:
    """Draw one state from the premise.

    ``rng_seed`` may be an integer seed, a ``SeedSequence`` or a
    ``Generator``.
    """
    return _sample(premise, np.random.default_rng(rng_seed))


def random_premise_states(premise: Premise, n: int, rng_seed=0) -> np.ndarray:
    """Draw ``n`` states; state ``i`` comes from substream ``i`` of the seed.

    The result does not depend on how the work might be partitioned.
    """
    children = _seed_sequence(rng_seed).spawn(n)
    return np.array([_sample(premise, np.random.default_rng(c)) for c in children])


def random_premise_pairs(premise: Premise, n: int, rng_seed=0) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``n`` independent pairs; pair ``i`` uses substream ``i``."""
    children = _seed_sequence(rng_seed).spawn(n)
    a = np.empty((n, premise.dim, premise.dim), complex)
    b = np.empty_like(a)
    for i, c in enumerate(children):
        g = np.random.default_rng(c)
        a[i] = _sample(premise, g)
        b[i] = _sample(premise, g)
    return a, b
