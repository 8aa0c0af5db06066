import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from priortomo.core import DimensionError, OperatorSubspace, random_hermitian
from priortomo.opsys import (
    ObservableSet,
    Povm,
    observables_from_povm,
    povm_from_complement,
    povm_from_observables,
    povm_from_operator_system,
    random_operator_system,
    span_of_povm,
    span_of_scheme,
    statistics,
)
from priortomo.premise import Premise, random_premise_pairs, random_premise_state
from priortomo.pure import james_observables
from priortomo.verify import random_povm

SX = np.array([[0, 1], [1, 0]], complex)
SY = np.array([[0, -1j], [1j, 0]])
SZ = np.diag([1.0, -1.0]).astype(complex)
E11 = np.diag([1.0, 0.0]).astype(complex)
E22 = np.diag([0.0, 1.0]).astype(complex)


def tetrahedral_povm():
    dirs = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]) / np.sqrt(3)
    return Povm(np.array([(np.eye(2) + n[0] * SX + n[1] * SY + n[2] * SZ) / 4 for n in dirs]))


def test_povm_validation():
    Povm(np.array([E11, E22]))
    with pytest.raises(ValueError):
        Povm(np.array([E11, E11]))
    with pytest.raises(ValueError):
        Povm(np.array([np.diag([1.5, 0.0]), np.diag([-0.5, 1.0])]))
    with pytest.raises(ValueError):
        Povm(np.array([SX, np.eye(2) - SX]))  # sums to I but SX is not PSD


def test_span_of_povm_examples():
    s = span_of_povm(Povm(np.array([np.eye(2) / 2, np.eye(2) / 2])))
    assert s.dim == 1 and s.contains_identity
    assert span_of_povm(tetrahedral_povm()).dim == 4


def test_povm_from_operator_system_examples():
    p = povm_from_operator_system(OperatorSubspace.from_span([np.eye(2)]))
    assert p.degenerate and p.n_outcomes == 1
    assert_allclose(p.effects[0], np.eye(2))

    full = OperatorSubspace.full(2)
    p = povm_from_operator_system(full)
    assert p.n_outcomes == 4 and span_of_povm(p).dim == 4

    s = OperatorSubspace.from_span([np.eye(2), SZ])
    p = povm_from_operator_system(s)
    assert p.n_outcomes == 2 and span_of_povm(p).equals(s)


def test_povm_from_operator_system_rejects_non_systems():
    with pytest.raises(ValueError):
        povm_from_operator_system(OperatorSubspace.from_span([SZ]))  # no identity
    a = np.zeros((2, 2))
    a[0, 1] = 1
    with pytest.raises(ValueError):
        povm_from_operator_system(OperatorSubspace.from_span([np.eye(2), a]))  # not adjoint-closed


@pytest.mark.parametrize("d", [2, 3, 4])
def test_povm_from_operator_system_random(d):
    rng = np.random.default_rng(d)
    for i in range(50):
        dim = int(rng.integers(1, d * d + 1))
        s = random_operator_system(d, dim, [d, i])
        p = povm_from_operator_system(s)
        assert p.n_outcomes == dim
        assert p.min_eigenvalue() >= -1e-10
        assert p.sum_residual() <= 1e-9
        assert span_of_povm(p).equals(s, tol=1e-9)


def test_povm_from_complement():
    t = np.diag([2.0, -1.0, -1.0])
    p = povm_from_complement([t])
    assert p.n_outcomes == 8
    assert span_of_povm(p).residual(t)[0] == pytest.approx(np.linalg.norm(t))


def test_povm_from_observables_examples():
    p = povm_from_observables(ObservableSet(SZ[None]))
    assert_allclose(p.effects, [E11, E22], atol=1e-15)
    p = povm_from_observables(ObservableSet(np.array([SX, SY, SZ])))
    assert p.n_outcomes == 4 and p.min_eigenvalue() >= -1e-12
    p = povm_from_observables(james_observables(3).observables)
    assert p.n_outcomes == 8


def test_povm_from_observables_bounds_and_zero_observable():
    rng = np.random.default_rng(0)
    obs = random_hermitian(3, rng, size=5)
    obs[2] = 0
    p = povm_from_observables(ObservableSet(obs))
    assert p.n_outcomes == 6
    assert_allclose(p.effects[2], 0)
    for a in p.effects[:-1]:
        w = np.linalg.eigvalsh(a)
        assert w.min() >= -1e-10 and w.max() <= 1 / 5 + 1e-10
    with pytest.raises(ValueError):
        povm_from_observables(ObservableSet(np.zeros((0, 2, 2))))


def test_observables_from_povm():
    assert_allclose(observables_from_povm(Povm(np.array([E11, E22]))).observables, [E11])
    assert len(observables_from_povm(tetrahedral_povm())) == 3


def test_conversion_preserves_collisions():
    # obs and its POVM are related by an invertible affine map on statistics
    rng = np.random.default_rng(3)
    obs = ObservableSet(random_hermitian(3, rng, size=4))
    povm = povm_from_observables(obs)
    r1, r2 = random_premise_pairs(Premise.pure(3), 200, 3)
    for a, b in zip(r1, r2):
        d_obs = np.abs(statistics(obs, a) - statistics(obs, b)).max()
        d_povm = np.abs(statistics(povm, a) - statistics(povm, b)).max()
        assert (d_obs <= 1e-10) == (d_povm <= 1e-10)
    # a genuine collision: move along the complement
    from priortomo.verify import complement_of_scheme

    comp = complement_of_scheme(obs).hermitian_basis()
    rho = np.eye(3) / 3
    other = rho + 0.01 * comp[0] / np.linalg.norm(comp[0], 2)
    assert np.abs(statistics(obs, rho) - statistics(obs, other)).max() <= 1e-12
    assert np.abs(statistics(povm, rho) - statistics(povm, other)).max() <= 1e-12


def test_span_of_scheme_adjoins_identity():
    obs = ObservableSet(SZ[None])
    assert span_of_scheme(obs).dim == 2
    assert span_of_scheme(obs).contains_identity


def test_statistics_examples():
    p = tetrahedral_povm()
    assert_allclose(statistics(p, np.eye(2) / 2), np.trace(p.effects, axis1=1, axis2=2).real / 2)
    assert_allclose(statistics(ObservableSet(SZ[None]), E11), [1.0])
    q = random_povm(4, 6, 1)
    rho = random_premise_state(Premise.bounded_rank(4, 4), 1)
    oracle = [sum(rho[k, l] * a[l, k] for k in range(4) for l in range(4)).real for a in q.effects]
    assert_allclose(statistics(q, rho), oracle, atol=1e-12)
    assert statistics(q, rho).sum() == pytest.approx(1)


def test_statistics_dim_mismatch():
    with pytest.raises(DimensionError):
        statistics(tetrahedral_povm(), np.eye(3) / 3)


def test_statistics_stack():
    q = random_povm(3, 5, 2)
    rhos = np.array([random_premise_state(Premise.pure(3), s) for s in range(4)])
    assert statistics(q, rhos).shape == (4, 5)
    assert_allclose(statistics(q, rhos)[2], statistics(q, rhos[2]))


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 1), st.integers(0, 2**32 - 1))
def test_property_statistics_affine(lam, seed):
    q = random_povm(3, 6, seed)
    a = random_premise_state(Premise.bounded_rank(3, 3), seed)
    b = random_premise_state(Premise.pure(3), seed + 1)
    lhs = statistics(q, lam * a + (1 - lam) * b)
    rhs = lam * statistics(q, a) + (1 - lam) * statistics(q, b)
    assert_allclose(lhs, rhs, atol=1e-12)
