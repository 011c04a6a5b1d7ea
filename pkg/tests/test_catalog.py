import numpy as np
import pytest
from numpy.testing import assert_allclose

from maxent.catalog import (
    bell,
    build,
    rotated_bell_basis,
    epr,
    ghz,
    maximally_entangled_entries,
    names,
    photon_twin_basis,
    spin1_single,
    su2_phase_state,
    three_qubit_family,
)
from maxent.certify import certify_generators, certify_slices, verify_family_spin1
from maxent.generators import pauli_set, spin_set, su_n_set
from maxent.measurement import local_expectations
from maxent.states import partial_trace, von_neumann_entropy

S2 = 1 / np.sqrt(2)
S3 = 1 / np.sqrt(3)


def gram(states):
    m = np.array([s.amplitudes for s in states])
    return m.conj() @ m.T


class TestTwoQubit:
    def test_epr_amplitudes(self):
        assert_allclose(epr(1).amplitudes, [0, S2, S2, 0])

    def test_bell_amplitudes(self):
        assert_allclose(bell(-1).amplitudes, [S2, 0, 0, -S2])

    def test_epr_orthogonal(self):
        assert epr(1).inner(epr(-1)) == pytest.approx(0, abs=1e-15)

    def test_sign_validation(self):
        with pytest.raises(ValueError):
            epr(2)

    def test_four_orthonormal(self):
        assert_allclose(gram([epr(1), epr(-1), bell(1), bell(-1)]), np.eye(4), atol=1e-12)

    def test_rotated_first(self):
        assert_allclose(rotated_bell_basis()[0].amplitudes, [0.5, 0.5j, 0.5j, 0.5])

    def test_rotated_orthonormal(self):
        assert_allclose(gram(rotated_bell_basis()), np.eye(4), atol=1e-12)

    def test_rotated_slices(self):
        for s in rotated_bell_basis():
            assert certify_slices(s).verdict

    def test_change_of_basis_unitary(self):
        a = np.array([s.amplitudes for s in rotated_bell_basis()])
        b = np.array([s.amplitudes for s in (epr(1), epr(-1), bell(1), bell(-1))])
        u = a.conj() @ b.T
        assert_allclose(u @ u.conj().T, np.eye(4), atol=1e-12)


class TestGHZ:
    def test_amplitudes(self):
        amps = ghz(1).amplitudes
        assert amps[0] == pytest.approx(S2) and amps[7] == pytest.approx(S2)
        assert np.count_nonzero(amps) == 2

    def test_certifies(self):
        assert certify_generators(ghz(1), pauli_set()).residual == pytest.approx(0, abs=1e-30)

    def test_entropy(self):
        for k in range(3):
            assert von_neumann_entropy(partial_trace(ghz(-1), k)) == pytest.approx(np.log(2), abs=1e-12)


class TestThreeQubitFamily:
    def test_top_of_range_is_ghz(self):
        s = three_qubit_family(S2, phi212=np.pi)
        assert s.fidelity(ghz(1)) == pytest.approx(1.0, abs=1e-12)
        assert three_qubit_family(S2).fidelity(ghz(-1)) == pytest.approx(1.0, abs=1e-12)

    def test_midpoint_certifies(self):
        assert certify_generators(three_qubit_family(0.5), pauli_set()).verdict

    def test_bottom_of_range(self):
        s = three_qubit_family(0.0, phi212=np.pi)
        want = np.zeros(8)
        want[2], want[5] = S2, -S2
        assert_allclose(s.amplitudes, want, atol=1e-15)
        assert certify_generators(s, pauli_set()).residual < 1e-30
        assert certify_generators(three_qubit_family(0.0), pauli_set()).verdict

    def test_moduli(self):
        t = three_qubit_family(0.4, 0.3, -1.0, 2.0).tensor
        assert abs(t[0, 0, 0]) == pytest.approx(0.4)
        assert abs(t[1, 1, 1]) == pytest.approx(0.4)
        assert abs(t[0, 1, 0]) == pytest.approx(np.sqrt(0.5 - 0.16))
        phase = np.angle(t[0, 0, 0] * t[1, 1, 1] / (t[0, 1, 0] * t[1, 0, 1]))
        assert abs(phase) == pytest.approx(np.pi)

    @pytest.mark.parametrize("r", [-0.1, 0.8])
    def test_range(self, r):
        with pytest.raises(ValueError):
            three_qubit_family(r)

    def test_continuity(self):
        for h in (1e-2, 1e-4, 1e-6):
            for r in (0.1, 0.4, 0.6):
                f = three_qubit_family(r, 0.2, 0.5, -0.7).fidelity(three_qubit_family(r + h, 0.2, 0.5, -0.7))
                assert 1 - f <= h  # quadratic in the gap


class TestSpinOne:
    def test_phase_state_zero(self):
        amps = su2_phase_state(0).amplitudes
        for i in (2, 4, 6):
            assert amps[i] == pytest.approx(S3)

    def test_phase_states_orthonormal(self):
        assert_allclose(gram([su2_phase_state(k) for k in range(3)]), np.eye(3), atol=1e-12)

    def test_phase_states_certify(self):
        for k in range(3):
            le = local_expectations(su2_phase_state(k), spin_set(1))
            assert le.sum_of_squares() < 1e-30

    def test_phase_state_range(self):
        with pytest.raises(ValueError):
            su2_phase_state(3)

    def test_twin_basis(self):
        twins = photon_twin_basis()
        assert twins[0].amplitudes[2] == 1
        for t in twins:
            assert not certify_generators(t, su_n_set(3)).verdict
        # |0>|0> has zero spin projections on each factor, like the single |0>
        spin = [certify_generators(t, spin_set(1)).verdict_generators for t in twins]
        assert spin == [False, True, False]
        span = np.array([t.amplitudes for t in twins])
        for k in range(3):
            a = su2_phase_state(k).amplitudes
            coeffs = span.conj() @ a
            assert_allclose(coeffs @ span, a, atol=1e-15)

    def test_single_examples(self):
        assert_allclose(spin1_single("I").amplitudes, [S2, 0, S2])
        assert_allclose(spin1_single("II").amplitudes, [0, 1, 0])
        s = spin1_single("III", lam_plus=0.5, phi_zero=np.pi / 2)
        assert_allclose(s.amplitudes, [0.5, 1j * S2, 0.5], atol=1e-15)
        assert local_expectations(s, spin_set(1)).sum_of_squares() < 1e-30
        s = spin1_single("III", lam_plus=0.5, phi_zero=-np.pi / 2)
        assert_allclose(s.amplitudes, [0.5, -1j * S2, 0.5], atol=1e-15)
        assert verify_family_spin1(s.amplitudes)

    def test_single_rejects_bad_phases(self):
        with pytest.raises(ValueError):
            spin1_single("III", lam_plus=0.5, phi_zero=0.0)
        with pytest.raises(ValueError):
            spin1_single("IV")


class TestRegistry:
    def test_all_entries_certify(self):
        for e in maximally_entangled_entries():
            assert certify_generators(e.state, e.generator_sets()).residual < 1e-12, e.name

    def test_names_build(self):
        for n in names():
            params = {"r": 0.3} if n == "three-qubit" else {}
            assert build(n, **params).name == n

    def test_bit_reproducible(self):
        a = build("three-qubit", r=0.3, phi111=1.0).state.amplitudes
        b = build("three-qubit", r=0.3, phi111=1.0).state.amplitudes
        assert np.array_equal(a, b)

    def test_errors(self):
        with pytest.raises(KeyError):
            build("no-such-state")
        with pytest.raises(ValueError):
            build("bell+", r=1.0)
        with pytest.raises(ValueError):
            build("three-qubit")
        with pytest.raises(ValueError):
            build("three-qubit", r=2.0)
