import numpy as np
import pytest

from maxent.lambda_sim import SimConfig, evolve
from maxent.states import make_state

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def random_unitary(n, rng):
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def local_rotate(state, rng):
    """Apply an independent random unitary to every factor."""
    u = np.array([[1.0]])
    for n in state.dims:
        u = np.kron(u, random_unitary(n, rng))
    return make_state(state.dims, u @ state.amplitudes)


@pytest.fixture(scope="session")
def default_run():
    """Full-length trajectory of the default resonant configuration."""
    return evolve(SimConfig(), keep_states=True)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
