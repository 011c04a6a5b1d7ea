import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from maxent.catalog import bell, ghz, random_three_qubit_family
from maxent.certify import certify_generators, certify_marginals, certify_slices
from maxent.generators import pauli_set, sets_for
from maxent.solver import (
    SolveOptions,
    descend,
    find_max_entangled,
    gradient,
    objective,
    restart_seeds,
)
from maxent.states import make_state, partial_trace, product_state, purity, random_state


def purity_oracle(state):
    return sum(2 * (purity(partial_trace(state, k)) - 1 / n) for k, n in enumerate(state.dims))


def fd_gradient(state, sets, h=1e-6):
    """Central differences of F(x / |x|) in the real coordinates (Re psi, Im psi)."""
    psi = np.array(state.amplitudes)
    x = np.concatenate([psi.real, psi.imag])
    d = psi.size

    def f(y):
        z = y[:d] + 1j * y[d:]
        return objective(make_state(state.dims, z), sets)

    out = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        out[i] = (f(x + e) - f(x - e)) / (2 * h)
    return out[:d] + 1j * out[d:]


class TestObjective:
    def test_bell(self):
        assert objective(bell(1), pauli_set()) == pytest.approx(0, abs=1e-30)

    def test_product(self):
        assert objective(product_state([2, 2], [0, 0]), pauli_set()) == pytest.approx(2.0, abs=1e-15)

    def test_purity_identity_two_by_three(self, rng):
        s = random_state([2, 3], rng)
        assert objective(s, sets_for(s.dims, "sun")) == pytest.approx(purity_oracle(s), abs=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.integers(2, 4), min_size=1, max_size=3), st.integers(0, 2**32 - 1))
    def test_purity_identity_property(self, dims, seed):
        s = random_state(dims, np.random.default_rng(seed))
        assert abs(objective(s, sets_for(s.dims, "sun")) - purity_oracle(s)) <= 1e-10

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            objective(random_state([3, 3], np.random.default_rng(1)), pauli_set())


class TestGradient:
    def test_matches_finite_differences(self, rng):
        for i in range(20):
            dims = [(2, 2), (2, 3), (2, 2, 2), (3, 3)][i % 4]
            s = random_state(dims, rng)
            sets = sets_for(dims, "sun")
            g = gradient(s, sets)
            fd = fd_gradient(s, sets)
            assert np.linalg.norm(g - fd) <= 1e-5 * np.linalg.norm(g)

    def test_tangent(self, rng):
        for _ in range(50):
            s = random_state([2, 3], rng)
            g = gradient(s, sets_for(s.dims, "sun"))
            assert abs(np.real(np.vdot(s.amplitudes, g))) <= 1e-12

    def test_vanishes_at_minima(self, rng):
        for s in (bell(1), ghz(-1), random_three_qubit_family(rng)):
            assert np.linalg.norm(gradient(s, pauli_set())) <= 1e-10


class TestSearch:
    def test_two_qubits(self):
        res = find_max_entangled([2, 2], pauli_set(), SolveOptions(restarts=10))
        assert res.converged and res.best_objective < 1e-16
        assert certify_slices(res.best_state).verdict

    def test_three_qubits(self):
        res = find_max_entangled([2, 2, 2], "sun", SolveOptions(restarts=10))
        assert res.best_objective < 1e-16
        assert certify_marginals(res.best_state)

    def test_unequal_dims_bound(self):
        res = find_max_entangled([2, 3], "sun", SolveOptions(restarts=50))
        assert res.best_objective == pytest.approx(1 / 3, abs=1e-6)
        assert not res.converged
        assert all(r.objective >= 1 / 3 - 1e-9 for r in res.per_restart)

    def test_best_is_minimum(self):
        res = find_max_entangled([2, 2], "sun", SolveOptions(restarts=4, seed=3))
        assert res.best_objective == min(r.objective for r in res.per_restart)
        assert res.best_objective >= -1e-12

    def test_deterministic(self):
        opts = SolveOptions(restarts=3, seed=11, max_iters=300)
        a = find_max_entangled([3, 3], "sun", opts)
        b = find_max_entangled([3, 3], "sun", opts)
        assert [r.objective for r in a.per_restart] == [r.objective for r in b.per_restart]
        assert np.array_equal(a.best_state.amplitudes, b.best_state.amplitudes)

    def test_workers_do_not_change_results(self):
        a = find_max_entangled([2, 2], "sun", SolveOptions(restarts=4, seed=5))
        b = find_max_entangled([2, 2], "sun", SolveOptions(restarts=4, seed=5, workers=3))
        assert [r.objective for r in a.per_restart] == [r.objective for r in b.per_restart]

    def test_seeds_distinct(self):
        seeds = restart_seeds(0, 50)
        assert len(set(seeds)) == 50
        assert seeds == restart_seeds(0, 50)

    def test_monotone(self, rng):
        for dims in ((2, 2), (2, 3), (3, 3)):
            _, hist = descend(random_state(dims, rng), sets_for(dims, "sun"),
                              SolveOptions(max_iters=500))
            assert all(b <= a for a, b in zip(hist, hist[1:]))

    def test_result_certifies(self):
        res = find_max_entangled([3, 3], "sun", SolveOptions(restarts=3))
        r = certify_generators(res.best_state, sets_for((3, 3), "sun"), tol=1e-8)
        assert r.verdict_generators and r.verdict_slices and r.verdict_marginals

    def test_many_solutions(self):
        states = [find_max_entangled([2, 2], "sun", SolveOptions(restarts=1, seed=s)).best_state
                  for s in range(4)]
        fids = [states[0].fidelity(t) for t in states[1:]]
        assert min(fids) < 0.99

    @pytest.mark.parametrize("kw", [{"restarts": 0}, {"grad_tol": 0.0}, {"armijo_shrink": 1.5}])
    def test_option_validation(self, kw):
        with pytest.raises(ValueError):
            SolveOptions(**kw)

    def test_json(self):
        res = find_max_entangled([2, 2], "sun", SolveOptions(restarts=2))
        data = res.to_json()
        assert len(data["per_restart"]) == 2
        assert data["best_state"]["dims"] == [2, 2]
