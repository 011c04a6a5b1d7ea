import numpy as np
import pytest
from numpy.testing import assert_allclose

from conftest import random_unitary
from maxent.catalog import bell, rotated_bell_basis, ghz, su2_phase_state
from maxent.generators import GeneratorSet, embed, pauli_set, spin_set, su_n_set
from maxent.measurement import expectation, local_expectations, variance
from maxent.states import CompositeSpace, make_state, product_state, random_state

Q2 = CompositeSpace((2, 2))
SX, SY, SZ = pauli_set()


def test_bell_sigma_z_vanishes():
    assert expectation(bell(1), embed(SZ, 0, Q2)) == pytest.approx(0, abs=1e-15)


def test_eigenstate_expectation():
    assert expectation(product_state([2, 2], [0, 0]), embed(SZ, 0, Q2)) == 1.0


def test_rotated_sigma_x_second_factor():
    # 2 Re(psi11 psi12* + psi21 psi22*) = 2 Re(-i/4 + i/4)
    assert expectation(rotated_bell_basis()[0], embed(SX, 1, Q2)) == pytest.approx(0, abs=1e-15)


def test_variance_examples():
    assert variance(bell(1), embed(SX, 0, Q2)) == pytest.approx(1.0, abs=1e-15)
    assert variance(make_state([2], [1, 0]), SZ) == pytest.approx(0.0, abs=1e-15)
    assert variance(product_state([2, 2], [0, 0]), embed(SX, 0, Q2)) == pytest.approx(1.0, abs=1e-15)


def test_errors():
    s = bell(1)
    with pytest.raises(ValueError):
        expectation(s, np.eye(3))
    with pytest.raises(ValueError):
        expectation(s, np.triu(np.ones((4, 4))))
    with pytest.raises(ValueError):
        variance(s, np.eye(2))


def test_ghz_all_nine_vanish():
    le = local_expectations(ghz(1), pauli_set())
    assert_allclose(np.concatenate(le.values), np.zeros(9), atol=1e-15)


def test_product_state_table():
    le = local_expectations(product_state([2, 2], [0, 0]), pauli_set())
    for ell in range(2):
        assert_allclose(le[ell], [0, 0, 1])


def test_phase_state_spin_one():
    le = local_expectations(su2_phase_state(0), spin_set(1))
    assert_allclose(np.concatenate(le.values), np.zeros(6), atol=1e-15)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        local_expectations(bell(1), spin_set(1))
    with pytest.raises(ValueError):
        local_expectations(bell(1), [pauli_set()])


def test_matches_embedded_expectations(rng):
    s = random_state([2, 3], rng)
    sets = [su_n_set(2), su_n_set(3)]
    le = local_expectations(s, sets)
    for ell, gs in enumerate(sets):
        for j, g in enumerate(gs):
            assert le[ell][j] == pytest.approx(expectation(s, embed(g, ell, s.space)), abs=1e-14)


def test_qubit_variance_identity(rng):
    for _ in range(50):
        s = random_state([2, 2, 2], rng)
        for ell in range(3):
            for g in pauli_set():
                op = embed(g, ell, s.space)
                assert variance(s, op) == pytest.approx(1 - expectation(s, op) ** 2, abs=1e-12)


def test_linearity(rng):
    s = random_state([3, 2], rng)
    a = embed(su_n_set(3)[1], 0, s.space)
    b = embed(su_n_set(2)[2], 1, s.space)
    alpha, beta = 0.7, -1.9
    assert expectation(s, alpha * a + beta * b) == pytest.approx(
        alpha * expectation(s, a) + beta * expectation(s, b), abs=1e-13
    )


def test_local_basis_rotation_invariance(rng):
    s = random_state([2, 3], rng)
    us = [random_unitary(2, rng), random_unitary(3, rng)]
    rotated = make_state(s.dims, np.kron(us[0], us[1]) @ s.amplitudes)
    sets = [su_n_set(2), su_n_set(3)]
    rot_sets = [
        GeneratorSet(gs.kind, np.array([u @ g @ u.conj().T for g in gs]), gs.labels)
        for gs, u in zip(sets, us)
    ]
    before = local_expectations(s, sets)
    after = local_expectations(rotated, rot_sets)
    for ell in range(2):
        assert_allclose(after[ell], before[ell], atol=1e-12)
