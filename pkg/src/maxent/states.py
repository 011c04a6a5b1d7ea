"""Pure states and density matrices on a tensor product of finite factors.

Amplitudes are stored flat in row-major order over the factor indices, so the
leftmost factor varies slowest. For qubits, local index 0 is |+> and 1 is |->;
for spin-1 factors, |+>, |0>, |-> map to 0, 1, 2.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import prod
from pathlib import Path
from typing import Sequence

import numpy as np

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
NEGATIVITY_TOL = 1e-8
MAX_TOTAL_DIM = 4096


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class CompositeSpace:
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise ValueError("a composite space needs at least one factor")
        if any(d < 2 for d in dims):
            raise ValueError(f"every factor dimension must be >= 2, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def total_dim(self) -> int:
        return prod(self.dims)

    @property
    def n_factors(self) -> int:
        return len(self.dims)

    def check_factor(self, ell: int) -> int:
        if not 0 <= ell < len(self.dims):
            raise IndexError(f"factor index {ell} out of range for dims {self.dims}")
        return ell


@dataclass(frozen=True)
class StateVector:
    """Normalized amplitude vector over a :class:`CompositeSpace`."""

    space: CompositeSpace
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(np.ravel(self.amplitudes))
        if amps.size != self.space.total_dim:
            raise ValueError(
                f"expected {self.space.total_dim} amplitudes for dims "
                f"{self.space.dims}, got {amps.size}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (norm={norm!r}); use make_state")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.space.dims

    @property
    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per factor."""
        return self.amplitudes.reshape(self.space.dims)

    def inner(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: "StateVector") -> float:
        return abs(self.inner(other)) ** 2

    def projector(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True)
class DensityMatrix:
    entries: np.ndarray

    def __post_init__(self):
        rho = _frozen(self.entries)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {rho.shape}")
        if np.max(np.abs(rho - rho.conj().T), initial=0.0) > HERMITIAN_TOL:
            raise ValueError("density matrix is not Hermitian")
        tr = np.trace(rho)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace is {tr}, expected 1")
        lam_min = np.linalg.eigvalsh(rho)[0]
        if lam_min < -NEGATIVITY_TOL:
            raise ValueError(f"density matrix has negative eigenvalue {lam_min}")
        object.__setattr__(self, "entries", rho)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def eigenvalues(self) -> np.ndarray:
        """Spectrum clipped to [0, 1]."""
        return np.clip(np.linalg.eigvalsh(self.entries), 0.0, 1.0)


@dataclass(frozen=True)
class SliceFamily:
    direction: int
    slices: tuple[np.ndarray, ...] = field(repr=False)

    def __len__(self):
        return len(self.slices)

    def as_matrix(self) -> np.ndarray:
        """Slices stacked as rows."""
        return np.stack(self.slices)

    def gram(self) -> np.ndarray:
        """Hermitian inner products ``gram[a, b] = <slice_a, slice_b>``."""
        m = self.as_matrix()
        return m.conj() @ m.T


def make_state(dims: Sequence[int], amplitudes: Sequence[complex]) -> StateVector:
    """Build a normalized state from unnormalized amplitudes.

    Raises:
        ValueError: on a length mismatch or an all-zero vector.
    """
    space = CompositeSpace(tuple(dims))
    amps = np.asarray(amplitudes, dtype=np.complex128).ravel()
    if amps.size != space.total_dim:
        raise ValueError(
            f"dims {space.dims} need {space.total_dim} amplitudes, got {amps.size}"
        )
    norm = np.linalg.norm(amps)
    if not np.isfinite(norm) or norm == 0.0:
        raise ValueError("cannot normalize a zero (or non-finite) amplitude vector")
    # skipping an already-unit vector keeps write/read round trips bit-exact
    if abs(norm - 1.0) > 4 * np.finfo(float).eps:
        amps = amps / norm
    return StateVector(space, amps)


def product_state(dims: Sequence[int], indices: Sequence[int]) -> StateVector:
    """Basis ket with local index ``indices[l]`` on factor ``l``."""
    dims = tuple(dims)
    if len(indices) != len(dims):
        raise ValueError("need one local index per factor")
    amps = np.zeros(prod(dims), dtype=np.complex128)
    amps[np.ravel_multi_index(tuple(indices), dims)] = 1.0
    return make_state(dims, amps)


def random_state(dims: Sequence[int], rng: np.random.Generator) -> StateVector:
    """Haar-random pure state from a complex Gaussian draw."""
    d = prod(dims)
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return make_state(dims, z)


def _reduced(state: StateVector, keep: int) -> np.ndarray:
    t = np.moveaxis(state.tensor, keep, 0).reshape(state.dims[keep], -1)
    return t @ t.conj().T


def partial_trace(state: StateVector, keep: int) -> DensityMatrix:
    """Reduced density matrix of factor ``keep``, all others traced out."""
    state.space.check_factor(keep)
    rho = _reduced(state, keep)
    return DensityMatrix((rho + rho.conj().T) / 2)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Entropy in nats, with the convention 0 ln 0 = 0."""
    p = rho.eigenvalues()
    p = p[p > 0.0]
    s = float(-np.sum(p * np.log(p)))
    return min(max(s, 0.0), float(np.log(rho.dim)))


def purity(rho: DensityMatrix) -> float:
    return float(np.real(np.sum(rho.entries * rho.entries.T)))


def slices(state: StateVector, direction: int) -> SliceFamily:
    state.space.check_factor(direction)
    t = np.moveaxis(state.tensor, direction, 0)
    rows = tuple(np.array(t[a]).ravel() for a in range(t.shape[0]))
    return SliceFamily(direction, rows)


def reassemble(family: SliceFamily, dims: Sequence[int]) -> np.ndarray:
    """Inverse of :func:`slices`: the flat row-major amplitude vector."""
    dims = tuple(dims)
    ell = family.direction
    rest = dims[:ell] + dims[ell + 1:]
    stacked = family.as_matrix().reshape((dims[ell],) + rest)
    return np.moveaxis(stacked, 0, ell).ravel()


def state_to_json(state: StateVector) -> dict:
    return {
        "dims": list(state.dims),
        "amplitudes": [[float(z.real), float(z.imag)] for z in state.amplitudes],
    }


def state_from_json(data: dict) -> StateVector:
    try:
        dims = [int(d) for d in data["dims"]]
        pairs = data["amplitudes"]
        amps = [complex(float(re), float(im)) for re, im in pairs]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed state file: {exc}") from exc
    return make_state(dims, amps)


def write_state(state: StateVector, path: str | Path) -> None:
    Path(path).write_text(json.dumps(state_to_json(state), indent=2) + "\n")


def read_state(path: str | Path) -> StateVector:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed state file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ValueError(f"malformed state file {path}: expected a JSON object")
    return state_from_json(data)
