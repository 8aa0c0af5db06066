"""
Closed-form bounds on the minimal number of observables.

All quantities count *observables* (equivalently, POVM outcomes minus one).
A lower bound of the form ``m > x`` is reported as the smallest integer
strictly above ``x``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .premise import Premise

__all__ = [
    "BoundReport",
    "binary_ones",
    "milgram_upper",
    "james_upper",
    "mayer_lower_pure",
    "grassmann_lower",
    "minkowski_dim",
    "generic_upper",
    "rank_upper",
    "pure_bound_table",
    "bound_report",
]


@dataclass(frozen=True)
class BoundReport:
    d: int
    premise: Premise
    lower: int
    upper: int
    formula_tags: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"lower bound {self.lower} exceeds upper bound {self.upper}")

    @property
    def exact(self) -> int | None:
        return self.lower if self.lower == self.upper else None

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "premise": self.premise.spec(),
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
            "formula_tags": list(self.formula_tags),
        }


def _check_dim(d: int) -> None:
    if int(d) != d or d < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {d}")


def binary_ones(n: int) -> int:
    """Number of ones in the binary expansion of ``n``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return bin(int(n)).count("1")


def james_upper(d: int) -> int:
    """The affine upper bound ``4d - 5`` realised by the anti-diagonal scheme."""
    _check_dim(d)
    return 4 * d - 5


def milgram_upper(d: int) -> int:
    """Improved pure-state upper bound.

    ``4d - 4 - a`` for odd ``d`` and ``4d - 5 - a`` for even ``d >= 4``, where
    ``a`` counts the ones in the binary expansion of ``d - 1``.  For ``d = 2``
    the formula does not apply and the exact value 3 is returned.
    """
    _check_dim(d)
    if d == 2:
        return 3
    a = binary_ones(d - 1)
    return 4 * d - 4 - a if d % 2 else 4 * d - 5 - a


def _nonembedding_form(dim_manifold: int, a: int, d: int) -> int:
    # strict inequality m > x, returned as x + 1
    x = 2 * dim_manifold - 2 * a
    if d % 2 == 1:
        if a % 4 == 3:
            x += 2
        elif a % 4 == 2:
            x += 1
    return x + 1


def mayer_lower_pure(d: int) -> int:
    """Topological lower bound for pure states in dimension ``d``."""
    _check_dim(d)
    return _nonembedding_form(2 * d - 2, binary_ones(d - 1), d)


def grassmann_lower(d: int, r: int) -> int:
    """Lower bound for states proportional to rank-``r`` projections.

    Same shape as the pure-state bound with manifold dimension
    ``2r(d - r)`` and ``a = sum_{j=1}^r [ones(d - j) - ones(j - 1)]``.
    """
    _check_dim(d)
    if not 1 <= r <= d - 1:
        raise ValueError(f"need 1 <= r <= d-1, got r={r}")
    a = sum(binary_ones(d - j) - binary_ones(j - 1) for j in range(1, r + 1))
    return _nonembedding_form(2 * r * (d - r), a, d)


def rank_upper(d: int, r: int) -> int:
    """``4r(d - r) - 1``, valid for ``1 <= r < d/2``."""
    if r < 1 or 2 * r >= d:
        raise ValueError(f"need 1 <= r < d/2, got d={d}, r={r}")
    return 4 * r * (d - r) - 1


def minkowski_dim(premise: Premise) -> int:
    """Box dimension of the premise set.

    For ``rank`` premises this is the dimension of the rank-``r`` stratum,
    ``2rd - r**2 - 1``; that value is a standard fact not backed by a
    computation here and is flagged by :func:`minkowski_dim_certified`.
    """
    d, kind = premise.dim, premise.kind
    if kind == "pure":
        return 2 * d - 2
    if kind == "grassmann":
        return 2 * premise.rank * (d - premise.rank)
    if kind == "depolarized":
        return 2 * d - 1
    if kind == "realpure":
        return d - 1
    if kind == "rank":
        r = min(premise.rank, d)
        return 2 * r * d - r * r - 1
    raise ValueError(f"unsupported premise kind {kind!r}")


def minkowski_dim_certified(premise: Premise) -> bool:
    return premise.kind != "rank"


def generic_upper(premise: Premise) -> int:
    """``2 D + 1``: almost every set of that many observables suffices."""
    return 2 * minkowski_dim(premise) + 1


def pure_bound_table(d_max: int) -> list[BoundReport]:
    """Lower/upper bounds for pure states, ``d = 2 .. d_max``."""
    if d_max < 2:
        raise ValueError("d_max must be >= 2")
    return [bound_report(Premise.pure(d)) for d in range(2, d_max + 1)]


def bound_report(premise: Premise) -> BoundReport:
    """Best available lower and upper bounds for a premise."""
    d, kind = premise.dim, premise.kind
    _check_dim(d)
    full = d * d - 1
    if kind == "pure" or (kind == "grassmann" and premise.rank in (1, d - 1)):
        lo = mayer_lower_pure(d)
        up = min(james_upper(d), milgram_upper(d))
        return BoundReport(d, premise, lo, up, ("nonembedding-lower", "anti-diagonal-upper" if up == 4 * d - 5 else "bilinear-upper"))
    if kind == "grassmann":
        r = premise.rank
        lo = grassmann_lower(d, r)
        cands = {"generic-upper": generic_upper(premise), "full-tomography": full}
        if 2 * r < d:
            cands["rank-witness-upper"] = rank_upper(d, r)
        elif 2 * (d - r) < d:
            # G(r, d) and G(d - r, d) are related by P -> (I - P), an affine map
            cands["rank-witness-upper"] = rank_upper(d, d - r)
        tag = min(cands, key=cands.get)
        return BoundReport(d, premise, lo, cands[tag], ("grassmann-nonembedding-lower", tag))
    if kind == "rank":
        r = premise.rank
        if r >= d:
            return BoundReport(d, premise, full, full, ("full-tomography",))
        lo = grassmann_lower(d, r)
        up = rank_upper(d, r) if 2 * r < d else full
        return BoundReport(d, premise, lo, up, ("grassmann-nonembedding-lower", "rank-witness-upper" if 2 * r < d else "full-tomography"))
    if kind == "depolarized":
        lo = mayer_lower_pure(d)
        up = min(generic_upper(premise), full)
        return BoundReport(d, premise, lo, up, ("nonembedding-lower", "generic-upper" if up < full else "full-tomography"))
    if kind == "realpure":
        if d == 3:
            return BoundReport(d, premise, 4, 4, ("nonorientable-lower", "quadratic-embedding-upper"))
        lo = minkowski_dim(premise)
        up = min(generic_upper(premise), james_upper(d), milgram_upper(d))
        return BoundReport(d, premise, lo, up, ("dimension-lower", "generic-upper"))
    raise ValueError(f"unsupported premise kind {kind!r}")
