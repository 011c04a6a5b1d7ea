"""Search for maximally entangled states by descent on the unit sphere.

The objective is the total squared local expectation
F(psi) = sum_l sum_j <psi|g_j^(l)|psi>^2, which vanishes exactly on the
maximally entangled states. Its minimum over states is reported even when
it is positive, e.g. for unequal factor dimensions.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import prod
from typing import Sequence

import numpy as np

from .generators import GeneratorSet, apply_local, sets_for
from .measurement import local_expectations, normalize_sets
from .states import CompositeSpace, StateVector, make_state

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolveOptions:
    restarts: int = 10
    max_iters: int = 20000
    grad_tol: float = 1e-13
    objective_tol: float = 1e-16
    seed: int = 0
    armijo_shrink: float = 0.5
    armijo_slope: float = 1e-4
    initial_step: float = 0.1
    workers: int = 1

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not (self.grad_tol > 0 and self.objective_tol > 0):
            raise ValueError("tolerances must be positive")
        if not 0 < self.armijo_shrink < 1 or not 0 < self.armijo_slope < 1:
            raise ValueError("Armijo parameters must lie in (0, 1)")


@dataclass(frozen=True)
class RestartRecord:
    seed: int
    objective: float
    iterations: int
    state: StateVector = field(repr=False)


@dataclass(frozen=True)
class SolveResult:
    best_state: StateVector
    best_objective: float
    converged: bool
    per_restart: tuple[RestartRecord, ...]

    def to_json(self) -> dict:
        from .states import state_to_json

        return {
            "best_objective": self.best_objective,
            "converged": self.converged,
            "per_restart": [
                {"seed": r.seed, "objective": r.objective, "iterations": r.iterations}
                for r in self.per_restart
            ],
            "best_state": state_to_json(self.best_state),
        }


def objective(state: StateVector, sets: GeneratorSet | Sequence[GeneratorSet]) -> float:
    return local_expectations(state, sets).sum_of_squares()


class _Problem:
    """Objective and Riemannian gradient on raw complex vectors."""

    def __init__(self, dims: Sequence[int], sets: Sequence[GeneratorSet]):
        self.dims = tuple(dims)
        self.mats = [np.asarray(gs.matrices) for gs in sets]

    def value_and_ambient(self, psi: np.ndarray, want_grad: bool = True):
        t = psi.reshape(self.dims)
        f = 0.0
        grad = np.zeros_like(t) if want_grad else None
        for ell, g in enumerate(self.mats):
            applied = apply_local(g, ell, t)
            ev = (applied.reshape(len(g), -1) @ t.conj().ravel()).real
            f += float(ev @ ev)
            if want_grad:
                # d/d(Re, Im) of <g>^2 is 2<g> * 2 g psi, packed as a complex vector
                grad += 4 * np.tensordot(ev, applied, axes=1)
        return f, (grad.ravel() if want_grad else None)

    def value(self, psi: np.ndarray) -> float:
        return self.value_and_ambient(psi, want_grad=False)[0]


def _project(psi: np.ndarray, v: np.ndarray) -> np.ndarray:
    # tangent space of the real sphere: remove the component along psi
    return v - np.real(np.vdot(psi, v)) * psi


def gradient(state: StateVector, sets) -> np.ndarray:
    """Riemannian gradient of the objective at ``state``.

    Returned as a complex vector ``v`` whose real and imaginary parts are the
    gradient components with respect to Re(psi) and Im(psi).
    """
    sets = normalize_sets(state, sets)
    prob = _Problem(state.dims, sets)
    psi = np.array(state.amplitudes)
    _, amb = prob.value_and_ambient(psi)
    return _project(psi, amb)


def _descend(
    prob: _Problem, psi: np.ndarray, opts: SolveOptions, history: list | None = None
) -> tuple[np.ndarray, float, int]:
    f, amb = prob.value_and_ambient(psi)
    if history is not None:
        history.append(f)
    step = opts.initial_step
    it = 0
    stalled = 0
    for it in range(1, opts.max_iters + 1):
        g = _project(psi, amb)
        gn2 = float(np.vdot(g, g).real)
        if f == 0.0 or np.sqrt(gn2) <= opts.grad_tol:
            break
        accepted = False
        while step > 1e-18:
            cand = psi - step * g
            cand /= np.linalg.norm(cand)
            fc = prob.value(cand)
            if fc <= f - opts.armijo_slope * step * gn2:
                accepted = True
                break
            step *= opts.armijo_shrink
        if not accepted:
            break
        # rounding-level progress at a positive minimum: stop after a run of them
        stalled = stalled + 1 if f - fc <= 8 * np.finfo(float).eps * f else 0
        psi = cand
        f, amb = prob.value_and_ambient(psi)
        if history is not None:
            history.append(f)
        step = min(step * 2.0, 1.0)
        if stalled >= 20:
            break
    return psi, f, it


def descend(
    state: StateVector, sets, options: SolveOptions | None = None
) -> tuple[StateVector, list[float]]:
    """Single descent run from ``state``; returns the end point and the
    objective at every accepted iterate."""
    sets = normalize_sets(state, sets)
    history: list[float] = []
    psi, _, _ = _descend(_Problem(state.dims, sets), np.array(state.amplitudes),
                         options or SolveOptions(), history)
    return make_state(state.dims, psi), history


def restart_seeds(seed: int, restarts: int) -> list[int]:
    children = np.random.SeedSequence(seed).spawn(restarts)
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in children]


def find_max_entangled(
    dims: Sequence[int],
    sets: GeneratorSet | Sequence[GeneratorSet] | str = "sun",
    options: SolveOptions | None = None,
) -> SolveResult:
    """Minimize the objective from several seeded random starts.

    Each restart draws a complex Gaussian vector from its own seed, then runs
    projected gradient descent with Armijo backtracking, renormalizing after
    every step. Non-convergence is reported through ``converged``.
    """
    opts = options or SolveOptions()
    space = CompositeSpace(tuple(dims))
    if isinstance(sets, str):
        sets = sets_for(space.dims, sets)
    elif isinstance(sets, GeneratorSet):
        sets = [sets] * space.n_factors
    probe = make_state(space.dims, np.ones(space.total_dim))
    sets = normalize_sets(probe, sets)
    prob = _Problem(space.dims, sets)
    d = prod(space.dims)

    def run(seed: int) -> RestartRecord:
        rng = np.random.default_rng(seed)
        z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        psi, f, it = _descend(prob, z / np.linalg.norm(z), opts)
        state = make_state(space.dims, psi)
        f = prob.value(np.asarray(state.amplitudes))
        log.debug("restart seed=%d objective=%.3e iterations=%d", seed, f, it)
        return RestartRecord(seed, f, it, state)

    seeds = restart_seeds(opts.seed, opts.restarts)
    if opts.workers > 1:
        with ThreadPoolExecutor(opts.workers) as pool:
            records = tuple(pool.map(run, seeds))
    else:
        records = tuple(run(s) for s in seeds)
    best = min(range(len(records)), key=lambda i: (records[i].objective, i))
    rec = records[best]
    return SolveResult(rec.state, rec.objective, rec.objective <= opts.objective_tol, records)
