"""Expectation values and variances of observables on pure states."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .generators import GeneratorSet, apply_local
from .states import StateVector

HERMITIAN_TOL = 1e-10
IMAG_TOL = 1e-10


def _check_operator(state: StateVector, op) -> np.ndarray:
    op = np.asarray(op, dtype=complex)
    d = state.space.total_dim
    if op.shape != (d, d):
        raise ValueError(f"operator shape {op.shape} does not match state dimension {d}")
    if np.max(np.abs(op - op.conj().T)) > HERMITIAN_TOL:
        raise ValueError("operator is not Hermitian")
    return op


def expectation(state: StateVector, op) -> float:
    """<psi|A|psi> for a Hermitian full-space operator ``A``."""
    op = _check_operator(state, op)
    psi = state.amplitudes
    val = np.vdot(psi, op @ psi)
    if abs(val.imag) > IMAG_TOL:
        raise ValueError(f"expectation has imaginary part {val.imag}")
    return float(val.real)


def variance(state: StateVector, op) -> float:
    op = _check_operator(state, op)
    psi = state.amplitudes
    mean = np.vdot(psi, op @ psi).real
    second = np.vdot(psi, (op @ op) @ psi).real
    return float(second - mean**2)


@dataclass(frozen=True)
class LocalExpectations:
    """Expectation of every generator on every factor.

    ``values[l][j]`` is <g_j> for the j-th generator of factor ``l``.
    """

    values: tuple[np.ndarray, ...]
    labels: tuple[tuple[str, ...], ...]

    def __getitem__(self, ell: int) -> np.ndarray:
        return self.values[ell]

    def sum_of_squares(self) -> float:
        return float(sum(np.sum(v**2) for v in self.values))

    def items(self):
        for ell, (vals, labs) in enumerate(zip(self.values, self.labels)):
            for lab, v in zip(labs, vals):
                yield ell, lab, float(v)

    def to_json(self) -> list[dict]:
        return [
            {"factor": ell, "labels": list(labs), "values": [float(v) for v in vals]}
            for ell, (vals, labs) in enumerate(zip(self.values, self.labels))
        ]


def normalize_sets(state: StateVector, sets) -> list[GeneratorSet]:
    """Accept one set for every factor or a per-factor sequence."""
    if isinstance(sets, GeneratorSet):
        sets = [sets] * state.space.n_factors
    sets = list(sets)
    if len(sets) != state.space.n_factors:
        raise ValueError(
            f"got {len(sets)} generator sets for {state.space.n_factors} factors"
        )
    for ell, (gs, n) in enumerate(zip(sets, state.dims)):
        if gs.local_dim != n:
            raise ValueError(
                f"factor {ell} has dimension {n}, generator set acts on {gs.local_dim}"
            )
    return sets


def local_expectations(
    state: StateVector, sets: GeneratorSet | Sequence[GeneratorSet]
) -> LocalExpectations:
    sets = normalize_sets(state, sets)
    psi = state.tensor
    values = []
    for ell, gs in enumerate(sets):
        applied = apply_local(gs.matrices, ell, psi)
        raw = applied.reshape(len(gs), -1) @ psi.conj().ravel()
        if np.max(np.abs(raw.imag), initial=0.0) > IMAG_TOL:
            raise ValueError("local expectation has a non-negligible imaginary part")
        values.append(raw.real.copy())
    return LocalExpectations(tuple(values), tuple(gs.labels for gs in sets))
