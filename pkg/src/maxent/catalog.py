"""Named maximally entangled states and parameterized families.

Qubit index convention: |+> is 0, |-> is 1. Spin-1: |+>, |0>, |-> are 0, 1, 2.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .generators import GeneratorSet, sets_for
from .states import StateVector, make_state, product_state

SQRT2 = np.sqrt(2.0)
SQRT3 = np.sqrt(3.0)


def _sign(sign: int) -> int:
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")
    return sign


def epr(sign: int = 1) -> StateVector:
    """(|+-> +- |-+>)/sqrt(2)."""
    s = _sign(sign)
    return make_state([2, 2], np.array([0, 1, s, 0]) / SQRT2)


def bell(sign: int = 1) -> StateVector:
    """(|++> +- |-->)/sqrt(2)."""
    s = _sign(sign)
    return make_state([2, 2], np.array([1, 0, 0, s]) / SQRT2)


def rotated_bell_basis() -> list[StateVector]:
    """The four-term two-qubit state (1/2)(1, i, i, 1) and its three partners.

    Together they form an orthonormal basis of maximally entangled states
    with every basis ket populated.
    """
    rows = [
        (1, 1j, 1j, 1),
        (1, -1j, 1j, -1),
        (1j, 1, 1, 1j),
        (-1j, 1, -1, 1j),
    ]
    return [make_state([2, 2], np.array(r) / 2) for r in rows]


def ghz(sign: int = 1) -> StateVector:
    """(|+++> +- |--->)/sqrt(2)."""
    s = _sign(sign)
    amps = np.zeros(8, dtype=complex)
    amps[0] = 1 / SQRT2
    amps[7] = s / SQRT2
    return make_state([2, 2, 2], amps)


def three_qubit_family(
    r: float, phi111: float = 0.0, phi121: float = 0.0, phi212: float = 0.0
) -> StateVector:
    """Four-slot three-qubit state on |+++>, |+-+>, |-+->, |--->.

    Moduli ``r`` on |+++> and |--->, sqrt(1/2 - r^2) on the other two. The
    phase on |---> is fixed by phi111 - phi121 - phi212 + phi222 = pi.
    """
    if not 0.0 <= r <= 1 / SQRT2 + 1e-15:
        raise ValueError(f"r must lie in [0, 1/sqrt(2)], got {r}")
    r = min(r, 1 / SQRT2)
    q = np.sqrt(max(0.5 - r * r, 0.0))
    phi222 = np.pi - phi111 + phi121 + phi212
    t = np.zeros((2, 2, 2), dtype=complex)
    t[0, 0, 0] = r * np.exp(1j * phi111)
    t[0, 1, 0] = q * np.exp(1j * phi121)
    t[1, 0, 1] = q * np.exp(1j * phi212)
    t[1, 1, 1] = r * np.exp(1j * phi222)
    return make_state([2, 2, 2], t.ravel())


def three_term_ansatz(psi111: complex, psi121: complex, psi222: complex) -> StateVector:
    """Three-slot ansatz on |+++>, |+-+>, |--->; certifies only as GHZ."""
    t = np.zeros((2, 2, 2), dtype=complex)
    t[0, 0, 0] = psi111
    t[0, 1, 0] = psi121
    t[1, 1, 1] = psi222
    return make_state([2, 2, 2], t.ravel())


def photon_twin_basis() -> list[StateVector]:
    """Product kets |+1 -2>, |0 0>, |-1 +2> of two spin-1 factors."""
    return [product_state([3, 3], idx) for idx in ((0, 2), (1, 1), (2, 0))]


def su2_phase_state(k: int) -> StateVector:
    """(|+->  + e^{i phi_k}|00> + e^{2 i phi_k}|-+>)/sqrt(3), phi_k = 2 k pi / 3."""
    if k not in (0, 1, 2):
        raise ValueError(f"k must be 0, 1 or 2, got {k!r}")
    phi = 2 * k * np.pi / 3
    amps = np.zeros(9, dtype=complex)
    amps[0 * 3 + 2] = 1
    amps[1 * 3 + 1] = np.exp(1j * phi)
    amps[2 * 3 + 0] = np.exp(2j * phi)
    return make_state([3, 3], amps / SQRT3)


def spin1_single(
    kind: str,
    phi: float = 0.0,
    lam_plus: float | None = None,
    phi_plus: float = 0.0,
    phi_minus: float = 0.0,
    phi_zero: float | None = None,
) -> StateVector:
    """Single spin-1 states with vanishing spin-projection expectations.

    ``kind="I"``: (|+> + e^{i phi}|->)/sqrt(2).
    ``kind="II"``: |0>.
    ``kind="III"``: moduli (lam_plus, sqrt(1 - 2 lam_plus^2), lam_plus) with
    phases phi_plus, phi_zero, phi_minus satisfying
    cos((phi_plus + phi_minus - 2 phi_zero)/2) = 0. If ``phi_zero`` is
    omitted it is set to (phi_plus + phi_minus - pi)/2.
    """
    if kind == "I":
        return make_state([3], np.array([1, 0, np.exp(1j * phi)]) / SQRT2)
    if kind == "II":
        return make_state([3], [0, 1, 0])
    if kind != "III":
        raise ValueError(f"unknown spin-1 kind {kind!r}")
    if lam_plus is None:
        raise ValueError("kind III needs lam_plus")
    if not 0.0 <= lam_plus <= 1 / SQRT2 + 1e-15:
        raise ValueError(f"lam_plus must lie in [0, 1/sqrt(2)], got {lam_plus}")
    lam_plus = min(lam_plus, 1 / SQRT2)
    lam_zero = np.sqrt(max(1 - 2 * lam_plus**2, 0.0))
    if phi_zero is None:
        phi_zero = (phi_plus + phi_minus - np.pi) / 2
    elif lam_plus * lam_zero * abs(np.cos((phi_plus + phi_minus - 2 * phi_zero) / 2)) > 1e-12:
        raise ValueError("phases violate cos((phi_+ + phi_- - 2 phi_0)/2) = 0")
    amps = np.array(
        [
            lam_plus * np.exp(1j * phi_plus),
            lam_zero * np.exp(1j * phi_zero),
            lam_plus * np.exp(1j * phi_minus),
        ]
    )
    return make_state([3], amps)


def random_two_qubit_family(rng: np.random.Generator) -> StateVector:
    """Random member of the closed-form two-qubit family."""
    a = np.sqrt(0.5) * np.cos(rng.uniform(0, np.pi / 2))
    b = np.sqrt(0.5 - a * a)
    p11, p12, p21 = rng.uniform(-np.pi, np.pi, size=3)
    p22 = rng.choice([np.pi, -np.pi]) - p11 + p12 + p21
    amps = [a * np.exp(1j * p11), b * np.exp(1j * p12), b * np.exp(1j * p21), a * np.exp(1j * p22)]
    return make_state([2, 2], amps)


def random_three_qubit_family(rng: np.random.Generator) -> StateVector:
    r = rng.uniform(0, 1 / SQRT2)
    return three_qubit_family(r, *rng.uniform(-np.pi, np.pi, size=3))


def random_spin1_family(rng: np.random.Generator) -> StateVector:
    lam = rng.uniform(0, 1 / SQRT2)
    pp, pm = rng.uniform(-np.pi, np.pi, size=2)
    branch = rng.choice([1.0, -1.0])
    return spin1_single("III", lam_plus=lam, phi_plus=pp, phi_minus=pm,
                        phi_zero=(pp + pm - branch * np.pi) / 2)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    state: StateVector
    parameters: dict = field(default_factory=dict)
    generator_kind: str = "auto"

    def generator_sets(self) -> list[GeneratorSet]:
        return sets_for(self.state.dims, self.generator_kind)


def _rotated(i: int) -> Callable[..., StateVector]:
    return lambda: rotated_bell_basis()[i]


# name -> (builder, accepted float parameters)
_BUILDERS: dict[str, tuple[Callable[..., StateVector], tuple[str, ...]]] = {
    "epr+": (lambda: epr(1), ()),
    "epr-": (lambda: epr(-1), ()),
    "bell+": (lambda: bell(1), ()),
    "bell-": (lambda: bell(-1), ()),
    "rotated-0": (_rotated(0), ()),
    "rotated-1": (_rotated(1), ()),
    "rotated-2": (_rotated(2), ()),
    "rotated-3": (_rotated(3), ()),
    "ghz+": (lambda: ghz(1), ()),
    "ghz-": (lambda: ghz(-1), ()),
    "three-qubit": (three_qubit_family, ("r", "phi111", "phi121", "phi212")),
    "phase-0": (lambda: su2_phase_state(0), ()),
    "phase-1": (lambda: su2_phase_state(1), ()),
    "phase-2": (lambda: su2_phase_state(2), ()),
    "twin-0": (lambda: photon_twin_basis()[0], ()),
    "twin-1": (lambda: photon_twin_basis()[1], ()),
    "twin-2": (lambda: photon_twin_basis()[2], ()),
    "spin1-I": (lambda phi=0.0: spin1_single("I", phi=phi), ("phi",)),
    "spin1-II": (lambda: spin1_single("II"), ()),
    "spin1-III": (
        lambda lam_plus=0.5, phi_plus=0.0, phi_minus=0.0, phi_zero=None: spin1_single(
            "III", lam_plus=lam_plus, phi_plus=phi_plus, phi_minus=phi_minus, phi_zero=phi_zero
        ),
        ("lam_plus", "phi_plus", "phi_minus", "phi_zero"),
    ),
}

REQUIRED = {"three-qubit": ("r",)}


def names() -> list[str]:
    return list(_BUILDERS)


def build(name: str, **params: float) -> CatalogEntry:
    """Construct a catalog entry by identifier.

    Raises:
        KeyError: unknown name.
        ValueError: unknown or invalid parameters.
    """
    if name not in _BUILDERS:
        raise KeyError(f"unknown catalog state {name!r}; known: {', '.join(_BUILDERS)}")
    fn, allowed = _BUILDERS[name]
    extra = set(params) - set(allowed)
    if extra:
        raise ValueError(f"{name} does not take parameters {sorted(extra)}")
    missing = [p for p in REQUIRED.get(name, ()) if p not in params]
    if missing:
        raise ValueError(f"{name} requires parameters {missing}")
    return CatalogEntry(name, fn(**params), dict(params))


def maximally_entangled_entries() -> list[CatalogEntry]:
    """Every named state that should certify, with its generator family."""
    out = [build(n) for n in ("epr+", "epr-", "bell+", "bell-", "rotated-0", "rotated-1",
                              "rotated-2", "rotated-3", "ghz+", "ghz-",
                              "phase-0", "phase-1", "phase-2", "spin1-II")]
    out.append(build("spin1-I", phi=0.0))
    out.append(build("spin1-I", phi=1.1))
    out.append(build("spin1-III", lam_plus=0.5, phi_zero=-np.pi / 2))
    out.append(build("three-qubit", r=0.5))
    return out
