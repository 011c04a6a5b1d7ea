"""Maximal-entanglement certification.

Three routes are offered: vanishing local generator expectations, orthogonal
equal-norm parallel slices of the coefficient tensor, and maximally mixed
single-factor marginals. With complete su(n) generator sets on every factor
they are equivalent; with spin-projection sets on n > 2 only the generator
route applies.

The ``verify_family_*`` helpers check closed-form amplitude/phase conditions
directly from the coefficients, independently of any generator matrices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .generators import GeneratorSet, sets_for
from .measurement import LocalExpectations, local_expectations, normalize_sets
from .states import StateVector, partial_trace, slices

DEFAULT_TOL = 1e-10
FAMILY_TOL = 1e-10


@dataclass(frozen=True)
class SliceReport:
    tol: float
    inner_products: tuple[np.ndarray, ...]  # per direction, full Gram matrix
    norms: tuple[np.ndarray, ...]
    expected_norms: tuple[float, ...]
    verdict: bool

    def to_json(self) -> list[dict]:
        out = []
        for ell, (g, nrm, want) in enumerate(
            zip(self.inner_products, self.norms, self.expected_norms)
        ):
            off = g - np.diag(np.diag(g))
            out.append(
                {
                    "direction": ell,
                    "max_offdiag_inner_product": float(np.max(np.abs(off), initial=0.0)),
                    "norms": [float(x) for x in nrm],
                    "expected_norm": want,
                }
            )
        return out


@dataclass(frozen=True)
class CertReport:
    residual: float
    per_generator: LocalExpectations
    verdict_generators: bool
    verdict_slices: bool | None
    verdict_marginals: bool | None
    tol: float
    complete: bool = field(default=True)

    @property
    def verdict(self) -> bool:
        """All applicable verdicts hold."""
        checks = [self.verdict_generators, self.verdict_slices, self.verdict_marginals]
        return all(c for c in checks if c is not None)

    def nonzero(self, threshold: float | None = None) -> list[tuple[int, str, float]]:
        """Generators whose expectation magnitude exceeds ``threshold``."""
        thr = np.sqrt(self.tol) if threshold is None else threshold
        return [(ell, lab, v) for ell, lab, v in self.per_generator.items() if abs(v) > thr]

    def to_json(self) -> dict:
        return {
            "residual": self.residual,
            "tol": self.tol,
            "verdict_generators": self.verdict_generators,
            "verdict_slices": self.verdict_slices,
            "verdict_marginals": self.verdict_marginals,
            "complete_generator_sets": self.complete,
            "per_generator": self.per_generator.to_json(),
            "nonzero": [
                {"factor": ell, "label": lab, "value": v} for ell, lab, v in self.nonzero()
            ],
        }


def _check_tol(tol: float) -> float:
    if not tol > 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    return float(tol)


def certify_slices(state: StateVector, tol: float = DEFAULT_TOL) -> SliceReport:
    tol = _check_tol(tol)
    grams, norms, wants = [], [], []
    ok = True
    for ell, n in enumerate(state.dims):
        g = slices(state, ell).gram()
        nrm = np.sqrt(np.abs(np.diag(g).real))
        want = 1.0 / np.sqrt(n)
        off = g - np.diag(np.diag(g))
        if np.max(np.abs(off), initial=0.0) > tol or np.max(np.abs(nrm - want)) > tol:
            ok = False
        grams.append(g)
        norms.append(nrm)
        wants.append(float(want))
    return SliceReport(tol, tuple(grams), tuple(norms), tuple(wants), ok)


def marginal_distances(state: StateVector) -> list[float]:
    """Frobenius distance of each single-factor marginal from identity/n."""
    out = []
    for ell, n in enumerate(state.dims):
        rho = partial_trace(state, ell).entries
        out.append(float(np.linalg.norm(rho - np.eye(n) / n)))
    return out


def certify_marginals(state: StateVector, tol: float = DEFAULT_TOL) -> bool:
    tol = _check_tol(tol)
    return all(d <= tol for d in marginal_distances(state))


def certify_generators(
    state: StateVector,
    sets: GeneratorSet | Sequence[GeneratorSet] | None = None,
    tol: float = DEFAULT_TOL,
) -> CertReport:
    """Certify through the sum of squared local generator expectations.

    ``sets`` defaults to the complete su(n) basis on every factor. The slice
    and marginal verdicts are filled in only when every set is complete;
    otherwise they are ``None``.
    """
    tol = _check_tol(tol)
    if sets is None:
        sets = sets_for(state.dims, "sun")
    sets = normalize_sets(state, sets)
    table = local_expectations(state, sets)
    residual = table.sum_of_squares()
    complete = all(gs.complete for gs in sets)
    vs = vm = None
    if complete:
        vs = certify_slices(state, tol).verdict
        vm = certify_marginals(state, tol)
    return CertReport(residual, table, residual <= tol, vs, vm, tol, complete)


def _phase_balanced(m1: float, m2: float, phase_sum: float, tol: float) -> bool:
    # |m1 m2 (e^{ia} + e^{ib})| = 2 m1 m2 |cos((a - b)/2)|; zero moduli make it vacuous
    return 2 * m1 * m2 * abs(np.cos(phase_sum / 2)) <= tol


def verify_family_two_qubit(coeffs: Sequence[complex], tol: float = FAMILY_TOL) -> bool:
    """Closed-form two-qubit conditions on (psi_11, psi_12, psi_21, psi_22).

    Equal moduli on each diagonal, |psi_11|^2 + |psi_12|^2 = 1/2 and
    cos((phi_11 + phi_22 - phi_12 - phi_21)/2) = 0. The phase condition is
    weighted by the product of the moduli involved, so it holds vacuously
    when any coefficient vanishes.
    """
    c = np.asarray(coeffs, dtype=complex).ravel()
    if c.size != 4:
        raise ValueError("need four two-qubit amplitudes")
    if abs(np.linalg.norm(c) - 1) > 1e-12:
        return False
    a11, a12, a21, a22 = np.abs(c)
    p11, p12, p21, p22 = np.angle(c)
    return (
        abs(a22 - a11) <= tol
        and abs(a21 - a12) <= tol
        and abs(a11**2 + a12**2 - 0.5) <= tol
        and _phase_balanced(
            np.sqrt(a11 * a22), np.sqrt(a12 * a21), p11 + p22 - p12 - p21, tol
        )
    )


THREE_QUBIT_SLOTS = ((0, 0, 0), (0, 1, 0), (1, 0, 1), (1, 1, 1))


def verify_family_three_qubit(coeffs, tol: float = FAMILY_TOL) -> bool:
    """Closed-form conditions for the four-slot three-qubit ansatz.

    ``coeffs`` is either the 8 flat amplitudes or the four values at
    |+ + +>, |+ - +>, |- + ->, |- - -> (in that order).
    """
    c = np.asarray(coeffs, dtype=complex).ravel()
    if c.size == 8:
        t = c.reshape(2, 2, 2)
        mask = np.ones((2, 2, 2), dtype=bool)
        for slot in THREE_QUBIT_SLOTS:
            mask[slot] = False
        if np.max(np.abs(t[mask])) > tol:
            raise ValueError("nonzero amplitude outside the four allowed slots")
        c = np.array([t[s] for s in THREE_QUBIT_SLOTS])
    elif c.size != 4:
        raise ValueError("need 4 slot amplitudes or 8 flat amplitudes")
    if abs(np.linalg.norm(c) - 1) > 1e-12:
        return False
    a111, a121, a212, a222 = np.abs(c)
    p111, p121, p212, p222 = np.angle(c)
    return (
        abs(a111**2 + a121**2 - 0.5) <= tol
        and abs(a222 - a111) <= tol
        and abs(a212 - a121) <= tol
        and _phase_balanced(
            np.sqrt(a111 * a222), np.sqrt(a121 * a212), p111 - p121 - p212 + p222, tol
        )
    )


def verify_family_spin1(coeffs: Sequence[complex], tol: float = FAMILY_TOL) -> bool:
    """Closed-form conditions for a single spin-1 state (lambda_+, lambda_0, lambda_-).

    |lambda_+| = |lambda_-| and cos((phi_+ + phi_- - 2 phi_0)/2) = 0, the
    latter vacuous when lambda_0 or lambda_+- vanish. This covers the
    |lambda_0| = 0 branch, the pure |0> branch and the general family.
    """
    c = np.asarray(coeffs, dtype=complex).ravel()
    if c.size != 3:
        raise ValueError("need three spin-1 amplitudes")
    if abs(np.linalg.norm(c) - 1) > 1e-12:
        return False
    lp, l0, lm = np.abs(c)
    pp, p0, pm = np.angle(c)
    return abs(lp - lm) <= tol and _phase_balanced(
        np.sqrt(lp * lm), l0, pp + pm - 2 * p0, tol
    )


def classify_spin1(coeffs: Sequence[complex], tol: float = FAMILY_TOL) -> str | None:
    """Which closed-form branch a certified spin-1 state belongs to.

    Returns ``"I"`` (no |0> component), ``"II"`` (pure |0>), ``"III"``
    (general family) or ``None`` if the state does not certify.
    """
    if not verify_family_spin1(coeffs, tol):
        return None
    lp, l0, _ = np.abs(np.asarray(coeffs, dtype=complex))
    if l0 <= tol:
        return "I"
    if lp <= tol:
        return "II"
    return "III"


def certify_state_family(state: StateVector, tol: float = FAMILY_TOL) -> bool:
    """Dispatch to the closed-form check matching the state's shape."""
    dims = state.dims
    if dims == (2, 2):
        return verify_family_two_qubit(state.amplitudes, tol)
    if dims == (2, 2, 2):
        return verify_family_three_qubit(state.amplitudes, tol)
    if dims == (3,):
        return verify_family_spin1(state.amplitudes, tol)
    raise ValueError(f"no closed-form family for dims {dims}")


def report_for(state: StateVector, kind: str = "auto", tol: float = DEFAULT_TOL) -> CertReport:
    """Convenience wrapper building the per-factor sets from a family name."""
    return certify_generators(state, sets_for(state.dims, kind), tol)

