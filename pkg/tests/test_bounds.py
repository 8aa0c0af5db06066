import math

import numpy as np
import pytest

from priortomo.bounds import (
    BoundReport,
    binary_ones,
    bound_report,
    generic_upper,
    grassmann_lower,
    james_upper,
    mayer_lower_pure,
    milgram_upper,
    minkowski_dim,
    minkowski_dim_certified,
    pure_bound_table,
    rank_upper,
)
from priortomo.premise import Premise


def test_binary_ones():
    assert [binary_ones(n) for n in (0, 7, 22)] == [0, 3, 3]
    with pytest.raises(ValueError):
        binary_ones(-1)


def test_bilinear_upper_examples():
    assert milgram_upper(8) == 24
    assert milgram_upper(5) == 15
    assert milgram_upper(4) == 9
    assert milgram_upper(2) == 3
    with pytest.raises(ValueError):
        milgram_upper(1)


@pytest.mark.parametrize("d", range(4, 40, 2))
def test_bilinear_upper_even_below_affine(d):
    assert milgram_upper(d) <= 4 * d - 5


def test_lower_examples():
    assert mayer_lower_pure(7) == 22
    assert mayer_lower_pure(6) == 17
    assert mayer_lower_pure(8) == 23
    with pytest.raises(ValueError):
        mayer_lower_pure(1)


def _lower_oracle(dim, a, d):
    # smallest integer m with m > x, from the three-case statement
    x = 2 * dim - 2 * a
    if d % 2 and a % 4 == 3:
        x = 2 * dim - 2 * a + 2
    elif d % 2 and a % 4 == 2:
        x = 2 * dim - 2 * a + 1
    return math.floor(x) + 1


@pytest.mark.parametrize("d", range(2, 40))
def test_lower_matches_case_analysis(d):
    assert mayer_lower_pure(d) == _lower_oracle(2 * d - 2, binary_ones(d - 1), d)


def test_grassmann_examples():
    for d in range(2, 17):
        assert grassmann_lower(d, 1) == mayer_lower_pure(d)
    assert grassmann_lower(4, 2) == 13
    # d = 5, r = 2: D = 12, a = 2, odd d with a = 2 mod 4 -> m > 2*12 - 4 + 1
    assert grassmann_lower(5, 2) == 22
    with pytest.raises(ValueError):
        grassmann_lower(4, 4)


def test_minkowski_examples():
    assert minkowski_dim(Premise.pure(5)) == 8
    assert minkowski_dim(Premise.grassmann(5, 2)) == 12
    assert minkowski_dim(Premise.depolarized(np.eye(4) / 4)) == 7
    assert minkowski_dim(Premise.real_pure(3)) == 2
    assert minkowski_dim(Premise.bounded_rank(4, 1)) == 6
    assert not minkowski_dim_certified(Premise.bounded_rank(4, 2))
    assert minkowski_dim_certified(Premise.pure(4))


def test_generic_examples():
    assert generic_upper(Premise.pure(3)) == 9 == 4 * 3 - 3
    for d in (2, 3, 5):
        assert generic_upper(Premise.depolarized(np.eye(d) / d)) == 4 * d - 1
    assert generic_upper(Premise.pure(2)) == 5


def test_rank_upper():
    assert rank_upper(3, 1) == 7
    assert rank_upper(4, 1) == 11
    assert rank_upper(7, 3) == 47
    for d, r in [(4, 2), (3, 0), (6, 3)]:
        with pytest.raises(ValueError):
            rank_upper(d, r)


def test_table_examples():
    t = pure_bound_table(8)
    assert [r.exact for r in t[:6]] == [3, 7, 9, 15, 17, 22]
    assert t[1].upper == 7 == james_upper(3)
    assert (t[-1].lower, t[-1].upper, t[-1].exact) == (23, 24, None)
    with pytest.raises(ValueError):
        pure_bound_table(1)


def test_table_properties():
    for r in pure_bound_table(30):
        d = r.d
        assert r.lower <= r.upper
        assert r.upper - r.lower <= 2
        a = binary_ones(d - 1)
        assert 1 <= a <= math.log2(d)
        if d >= 8:
            assert r.upper - r.lower <= a <= math.log2(d)
            assert 4 * d - 5 - r.upper <= 2 * math.log2(d)


def test_bound_report_invariants():
    with pytest.raises(ValueError):
        BoundReport(3, Premise.pure(3), 8, 7)
    r = BoundReport(3, Premise.pure(3), 7, 7)
    assert r.exact == 7
    d = r.to_dict()
    assert d["exact"] == 7 and d["premise"] == "pure"


@pytest.mark.parametrize(
    "premise",
    [
        Premise.pure(5),
        Premise.grassmann(5, 2),
        Premise.grassmann(6, 3),
        Premise.grassmann(6, 5),
        Premise.bounded_rank(6, 2),
        Premise.bounded_rank(4, 2),
        Premise.bounded_rank(3, 3),
        Premise.real_pure(3),
        Premise.real_pure(4),
        Premise.depolarized(np.eye(3) / 3),
    ],
)
def test_bound_report_all_kinds(premise):
    r = bound_report(premise)
    assert r.lower <= r.upper <= premise.dim**2 - 1
    assert r.formula_tags


def test_real_pure_qutrit_exact():
    assert bound_report(Premise.real_pure(3)).exact == 4
