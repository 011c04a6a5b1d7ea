"""Lambda-type three-level atoms in a two-mode cavity with a lossy Stokes mode.

Factor order is atoms first (levels 1, 2, 3 at local indices 0, 1, 2), then
the pump mode, then the Stokes mode. Natural units with hbar = 1.

The master equation

    drho/dt = -i[H, rho] + kappa (2 a_S rho a_S^+ - a_S^+ a_S rho - rho a_S^+ a_S)

is integrated with fixed-step classical RK4. The 2 -> 3 transition emits a
Stokes photon (g_S R_32 a_S^+ + h.c.); ``stokes_coupling="literal"`` switches
to g_S R_32 a_S + h.c. for comparison.
"""
from __future__ import annotations

import csv
import json
import logging
from dataclasses import asdict, dataclass, field, fields, replace
from math import prod
from pathlib import Path

import numpy as np
from scipy import sparse

from .generators import embed
from .states import CompositeSpace, DensityMatrix, StateVector, MAX_TOTAL_DIM

log = logging.getLogger(__name__)

TRACE_ABORT = 1e-6
CSV_COLUMNS = ("t", "trace", "n_pump", "n_stokes", "fidelity_final", "pop_psi1", "pop_psi2")


class SimulationError(RuntimeError):
    """Integration became numerically invalid (trace drift or blow-up)."""


@dataclass(frozen=True)
class SimConfig:
    atoms: int = 2
    pump_cutoff: int = 1
    stokes_cutoff: int = 1
    omega_p: float = 10.0
    omega_s: float = 7.0
    omega_12: float = 10.0
    omega_13: float = 3.0
    g_p: float = 0.1
    g_s: float = 0.1
    kappa: float = 0.1
    t_final: float = 200.0
    dt: float = 1e-3
    output_stride: int = 1000
    pump_photons: int = 1
    stokes_coupling: str = "emission"

    def __post_init__(self):
        if self.atoms < 1:
            raise ValueError("need at least one atom")
        if self.pump_cutoff < 1 or self.stokes_cutoff < 1:
            raise ValueError("Fock cutoffs must be >= 1")
        rates = (self.omega_p, self.omega_s, self.omega_12, self.omega_13,
                 self.g_p, self.g_s, self.kappa)
        if any(not np.isfinite(r) or r < 0 for r in rates):
            raise ValueError("frequencies, couplings and kappa must be finite and >= 0")
        if not self.omega_12 > self.omega_13:
            raise ValueError("level 3 must lie between levels 1 and 2 (omega_12 > omega_13)")
        if not self.dt > 0 or not self.t_final >= 0:
            raise ValueError("need dt > 0 and t_final >= 0")
        if self.output_stride < 1:
            raise ValueError("output_stride must be >= 1")
        if not 0 <= self.pump_photons <= self.pump_cutoff:
            raise ValueError("initial pump photons must not exceed the pump cutoff")
        if self.stokes_coupling not in ("emission", "literal"):
            raise ValueError("stokes_coupling must be 'emission' or 'literal'")
        if self.total_dim > MAX_TOTAL_DIM:
            raise ValueError(f"total dimension {self.total_dim} exceeds {MAX_TOTAL_DIM}")

    @property
    def dims(self) -> tuple[int, ...]:
        return (3,) * self.atoms + (self.pump_cutoff + 1, self.stokes_cutoff + 1)

    @property
    def total_dim(self) -> int:
        return prod(self.dims)

    @property
    def n_steps(self) -> int:
        return int(round(self.t_final / self.dt))

    @classmethod
    def resonant(cls, omega_12=10.0, omega_13=3.0, g=0.1, kappa=None, **kw) -> "SimConfig":
        """Pump resonant with 1-2, Stokes with 2-3, equal couplings, kappa = g by default."""
        return cls(omega_p=omega_12, omega_s=omega_12 - omega_13, omega_12=omega_12,
                   omega_13=omega_13, g_p=g, g_s=g, kappa=g if kappa is None else kappa, **kw)

    @classmethod
    def from_json(cls, data: dict) -> "SimConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        ints = {"atoms", "pump_cutoff", "stokes_cutoff", "output_stride", "pump_photons"}
        kw = {}
        for k, v in data.items():
            if k == "stokes_coupling":
                kw[k] = str(v)
            elif k in ints:
                if isinstance(v, bool) or int(v) != v:
                    raise ValueError(f"{k} must be an integer")
                kw[k] = int(v)
            else:
                kw[k] = float(v)
        return cls(**kw)

    def to_json(self) -> dict:
        return asdict(self)


def read_config(path: str | Path) -> SimConfig:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ValueError("config must be a JSON object")
    return SimConfig.from_json(data)


def build_space(config: SimConfig) -> CompositeSpace:
    return CompositeSpace(config.dims)


def _lower(n_max: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), k=1).astype(complex)


def _transition(i: int, j: int) -> np.ndarray:
    """Atomic |i><j| for levels numbered 1..3."""
    r = np.zeros((3, 3), dtype=complex)
    r[i - 1, j - 1] = 1
    return r


@dataclass(frozen=True)
class Operators:
    space: CompositeSpace
    a_p: np.ndarray
    a_s: np.ndarray
    hamiltonian: np.ndarray
    n1: np.ndarray
    n2: np.ndarray


def build_operators(config: SimConfig) -> Operators:
    space = build_space(config)
    A = config.atoms
    ip, is_ = A, A + 1
    a_p = embed(_lower(config.pump_cutoff), ip, space)
    a_s = embed(_lower(config.stokes_cutoff), is_, space)
    n_p = a_p.conj().T @ a_p
    n_s = a_s.conj().T @ a_s

    def atoms_sum(i, j):
        return sum(embed(_transition(i, j), f, space) for f in range(A))

    r22, r33 = atoms_sum(2, 2), atoms_sum(3, 3)
    r21, r32 = atoms_sum(2, 1), atoms_sum(3, 2)
    h0 = config.omega_p * n_p + config.omega_s * n_s + config.omega_12 * r22 + config.omega_13 * r33
    stokes = a_s.conj().T if config.stokes_coupling == "emission" else a_s
    v = config.g_p * r21 @ a_p + config.g_s * r32 @ stokes
    h = h0 + v + v.conj().T
    n1 = n_p + r22 + r33
    n2 = n_s - r33 if config.stokes_coupling == "emission" else n_s + r33
    return Operators(space, a_p, a_s, h, n1, n2)


def build_hamiltonian(config: SimConfig) -> np.ndarray:
    return build_operators(config).hamiltonian


def basis_index(config: SimConfig, levels, n_pump: int, n_stokes: int) -> int:
    """Flat index of |levels> x |n_pump> x |n_stokes>, levels numbered from 1."""
    idx = tuple(l - 1 for l in levels) + (n_pump, n_stokes)
    return int(np.ravel_multi_index(idx, config.dims))


def _symmetric_excitation(config: SimConfig, level: int, n_stokes: int) -> np.ndarray:
    """Equal superposition of one atom in ``level``, others in 1, no pump photons."""
    v = np.zeros(config.total_dim, dtype=complex)
    for f in range(config.atoms):
        levels = [1] * config.atoms
        levels[f] = level
        v[basis_index(config, levels, 0, n_stokes)] = 1
    return v / np.linalg.norm(v)


def psi_one(config: SimConfig) -> np.ndarray:
    return _symmetric_excitation(config, 2, 0)


def psi_two(config: SimConfig) -> np.ndarray:
    return _symmetric_excitation(config, 3, 1)


def psi_final(config: SimConfig) -> np.ndarray:
    """(|3,1> + |1,3>)/sqrt(2) x |0_P> x |0_S> for two atoms."""
    if config.atoms != 2:
        raise ValueError("the final target state is defined for two atoms")
    return _symmetric_excitation(config, 3, 0)


def initial_state(config: SimConfig) -> np.ndarray:
    """All atoms in level 1, ``pump_photons`` pump photons, empty Stokes mode."""
    v = np.zeros(config.total_dim, dtype=complex)
    v[basis_index(config, [1] * config.atoms, config.pump_photons, 0)] = 1
    return v


def _as_rho(initial, dim: int) -> np.ndarray:
    if isinstance(initial, StateVector):
        psi = np.asarray(initial.amplitudes)
        return np.outer(psi, psi.conj())
    if isinstance(initial, DensityMatrix):
        return np.array(initial.entries)
    arr = np.asarray(initial, dtype=complex)
    if arr.ndim == 1:
        return np.outer(arr, arr.conj())
    return arr.copy()


def fidelity_final(rho, config: SimConfig) -> float:
    target = psi_final(config)
    rho = rho.entries if isinstance(rho, DensityMatrix) else np.asarray(rho)
    return float(np.real(np.vdot(target, rho @ target)))


def atomic_conditional_state(rho, config: SimConfig, min_population: float = 1e-6) -> DensityMatrix:
    """Two-atom state conditioned on no photons and both atoms in levels {1, 3}.

    Level 1 maps to qubit index 0 (|+>), level 3 to index 1 (|->).

    Raises:
        ValueError: for A != 2 or if the conditioning event has population
            below ``min_population``.
    """
    if config.atoms != 2:
        raise ValueError("conditional atomic state is defined for two atoms")
    rho = rho.entries if isinstance(rho, DensityMatrix) else np.asarray(rho)
    idx = [basis_index(config, (l1, l2), 0, 0) for l1 in (1, 3) for l2 in (1, 3)]
    sub = rho[np.ix_(idx, idx)]
    pop = float(np.real(np.trace(sub)))
    if pop < min_population:
        raise ValueError(f"conditioning sector has population {pop:.3e}")
    sub = sub / pop
    return DensityMatrix((sub + sub.conj().T) / 2)


@dataclass
class Trajectory:
    times: np.ndarray
    records: dict[str, np.ndarray]
    final_rho: np.ndarray = field(repr=False)
    states: list[np.ndarray] | None = field(default=None, repr=False)

    def __getitem__(self, name: str) -> np.ndarray:
        return self.records[name]

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(CSV_COLUMNS)
            for k, t in enumerate(self.times):
                row = [t] + [self.records[c][k] for c in CSV_COLUMNS[1:]]
                w.writerow([repr(float(x)) for x in row])


def read_trajectory_csv(path: str | Path) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    if tuple(header) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header {header}")
    data = np.array([[float(x) for x in r] for r in body]).reshape(-1, len(header))
    return {name: data[:, i] for i, name in enumerate(header)}


def _rk4_gain(z: np.ndarray) -> np.ndarray:
    return np.abs(1 + z + z**2 / 2 + z**3 / 6 + z**4 / 24)


def liouvillian_spectrum(config: SimConfig) -> np.ndarray:
    """Eigenvalues of the master-equation generator.

    The jump term only lowers the Stokes photon number, so the generator is
    block triangular in that number and its spectrum is that of the no-jump
    part: -i (e_a - conj(e_b)) over eigenvalues e of H - i kappa a_S^+ a_S.
    """
    ops = build_operators(config)
    n_s = ops.a_s.conj().T @ ops.a_s
    e = np.linalg.eigvals(ops.hamiltonian - 1j * config.kappa * n_s)
    return np.unique(np.round(-1j * (e[:, None] - e.conj()[None, :]).ravel(), 12))


def max_stable_dt(config: SimConfig) -> float:
    """Largest step for which RK4 does not amplify any generator eigenmode."""
    lam = liouvillian_spectrum(config)
    lo, hi = 0.0, 10.0 / max(np.max(np.abs(lam)), 1e-12)
    for _ in range(60):
        mid = (lo + hi) / 2
        if np.max(_rk4_gain(lam * mid)) <= 1 + 1e-12:
            lo = mid
        else:
            hi = mid
    return lo


def check_step_size(config: SimConfig) -> None:
    """Raise :class:`SimulationError` when dt lies outside the RK4 stability region."""
    lam = liouvillian_spectrum(config)
    gain = float(np.max(_rk4_gain(lam * config.dt)))
    if gain > 1 + 1e-12:
        raise SimulationError(
            f"dt={config.dt:g} is unstable for RK4 (mode amplification {gain:.3g} per step); "
            f"use dt below {max_stable_dt(config):.4g}"
        )


def liouvillian(ops: Operators, kappa: float) -> sparse.csr_matrix:
    """Sparse generator acting on row-major vec(rho).

    Uses vec(A rho B) = (A kron B^T) vec(rho) with the non-Hermitian
    H_eff = H - i kappa a_S^+ a_S carrying the anticommutator part.
    """
    d = ops.hamiltonian.shape[0]
    a = sparse.csr_matrix(ops.a_s)
    ad = a.conj().T.tocsr()
    heff = sparse.csr_matrix(ops.hamiltonian) - 1j * kappa * (ad @ a)
    eye = sparse.identity(d, dtype=complex, format="csr")
    gen = -1j * sparse.kron(heff, eye) + 1j * sparse.kron(eye, heff.conj())
    if kappa:
        gen = gen + 2 * kappa * sparse.kron(a, a.conj())
    return gen.tocsr()


def evolve(config: SimConfig, initial=None, keep_states: bool = False) -> Trajectory:
    """Integrate the master equation from ``initial`` (default: ground atoms, pump photon).

    Raises:
        SimulationError: if dt is outside the RK4 stability region of the
            generator, or if during integration the trace drifts by more than
            1e-6 or an entry of rho leaves the unit disk.
    """
    check_step_size(config)
    ops = build_operators(config)
    d = config.total_dim
    rho = _as_rho(initial_state(config) if initial is None else initial, d)
    if rho.shape != (d, d):
        raise ValueError(f"initial state has shape {rho.shape}, expected {(d, d)}")

    liouv = liouvillian(ops, config.kappa)
    a = ops.a_s
    ad = a.conj().T

    n_p = ops.a_p.conj().T @ ops.a_p
    n_s = ad @ a
    p1, p2 = psi_one(config), psi_two(config)
    pfin = psi_final(config) if config.atoms == 2 else None

    times, rows, states = [], [], []

    def record(t, r):
        times.append(t)
        rows.append((
            float(np.real(np.trace(r))),
            float(np.real(np.sum(n_p * r.T))),
            float(np.real(np.sum(n_s * r.T))),
            float(np.real(np.vdot(pfin, r @ pfin))) if pfin is not None else float("nan"),
            float(np.real(np.vdot(p1, r @ p1))),
            float(np.real(np.vdot(p2, r @ p2))),
        ))
        if keep_states:
            states.append(r.copy())

    dt = config.dt
    n_steps = config.n_steps
    stride = config.output_stride
    record(0.0, rho)
    x = rho.ravel()
    for step in range(1, n_steps + 1):
        k1 = liouv @ x
        k2 = liouv @ (x + (dt / 2) * k1)
        k3 = liouv @ (x + (dt / 2) * k2)
        k4 = liouv @ (x + dt * k3)
        r = (x + (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4)).reshape(d, d)
        rho = (r + r.conj().T) / 2
        x = rho.ravel()
        drift = abs(np.trace(rho) - 1.0)
        bound = np.max(np.abs(x))
        if not (drift <= TRACE_ABORT and bound <= 1.0 + TRACE_ABORT):
            raise SimulationError(
                f"integration unstable at t={step * dt:.6g} (trace drift {drift:.3e}, "
                f"max |rho_ij| {bound:.3e}); dt={dt:g} is too large, "
                f"try dt below {max_stable_dt(config):.4g}"
            )
        if step % stride == 0 or step == n_steps:
            record(step * dt, rho)

    names = CSV_COLUMNS[1:]
    cols = np.array(rows).reshape(-1, len(names))
    return Trajectory(
        np.array(times),
        {n: cols[:, i] for i, n in enumerate(names)},
        rho,
        states if keep_states else None,
    )


def default_config(**overrides) -> SimConfig:
    return replace(SimConfig(), **overrides)
