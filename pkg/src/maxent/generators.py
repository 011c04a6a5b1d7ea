"""Hermitian generator families for the local symmetry algebras.

Complete bases (Pauli, su(n)) are normalized so that Tr(g_i g_j) = 2 delta_ij.
Spin matrices keep their physical scale, eigenvalues s, s-1, ..., -s.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .states import CompositeSpace

GEN_TOL = 1e-14


@dataclass(frozen=True)
class GeneratorSet:
    """Named family of traceless Hermitian matrices acting on one factor."""

    kind: str
    matrices: np.ndarray  # shape (k, n, n)
    labels: tuple[str, ...]
    spin: Fraction | None = None

    def __post_init__(self):
        mats = np.array(self.matrices, dtype=np.complex128, copy=True)
        if mats.ndim != 3 or mats.shape[1] != mats.shape[2]:
            raise ValueError("generators must be a stack of square matrices")
        if len(self.labels) != mats.shape[0]:
            raise ValueError("need one label per generator")
        herm = np.max(np.abs(mats - mats.conj().transpose(0, 2, 1)))
        tr = np.max(np.abs(np.trace(mats, axis1=1, axis2=2)))
        if herm > GEN_TOL or tr > GEN_TOL:
            raise ValueError("generators must be Hermitian and traceless")
        mats.setflags(write=False)
        object.__setattr__(self, "matrices", mats)

    @property
    def local_dim(self) -> int:
        return self.matrices.shape[1]

    @property
    def complete(self) -> bool:
        """True when the family spans every traceless Hermitian matrix."""
        n = self.local_dim
        if len(self) != n * n - 1:
            return False
        flat = self.matrices.reshape(len(self), -1)
        real = np.concatenate([flat.real, flat.imag], axis=1)
        return np.linalg.matrix_rank(real, tol=1e-10) == n * n - 1

    def __len__(self):
        return self.matrices.shape[0]

    def __iter__(self):
        return iter(self.matrices)

    def __getitem__(self, j):
        return self.matrices[j]


def pauli_set() -> GeneratorSet:
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    sz = np.array([[1, 0], [0, -1]], dtype=complex)
    return GeneratorSet("pauli", np.stack([sx, sy, sz]), ("x", "y", "z"))


def _as_spin(s) -> Fraction:
    try:
        two_s = Fraction(s).limit_denominator(1000) * 2
    except (TypeError, ValueError) as exc:
        raise ValueError(f"spin must be a number, got {s!r}") from exc
    if two_s.denominator != 1 or abs(float(two_s) - 2 * float(s)) > 1e-12:
        raise ValueError(f"spin must be a half-integer, got {s!r}")
    if two_s < 1:
        raise ValueError(f"spin must be >= 1/2, got {s!r}")
    return two_s / 2


def spin_matrices(s) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """S_x, S_y, S_z in the basis m = s, s-1, ..., -s."""
    s = _as_spin(s)
    n = int(2 * s) + 1
    m = np.array([float(s) - k for k in range(n)])
    sf = float(s)
    splus = np.zeros((n, n), dtype=complex)
    for k in range(1, n):
        # S+ |m_k> = sqrt(s(s+1) - m_k(m_k+1)) |m_k + 1>, and m_k + 1 sits at k-1
        splus[k - 1, k] = np.sqrt(sf * (sf + 1) - m[k] * (m[k] + 1))
    sminus = splus.conj().T
    sx = (splus + sminus) / 2
    sy = (splus - sminus) / 2j
    sz = np.diag(m).astype(complex)
    return sx, sy, sz


def spin_set(s) -> GeneratorSet:
    spin = _as_spin(s)
    return GeneratorSet("spin", np.stack(spin_matrices(spin)), ("Sx", "Sy", "Sz"), spin=spin)


def su_n_set(n: int) -> GeneratorSet:
    """Generalized Gell-Mann basis of su(n).

    Ordered as the n(n-1)/2 symmetric matrices, then the antisymmetric ones
    (both over pairs j < k in lexicographic order), then the n-1 diagonal ones.
    """
    n = int(n)
    if n < 2:
        raise ValueError(f"su(n) needs n >= 2, got {n}")
    sym, asym, diag = [], [], []
    sym_l, asym_l, diag_l = [], [], []
    for j in range(n):
        for k in range(j + 1, n):
            a = np.zeros((n, n), dtype=complex)
            a[j, k] = a[k, j] = 1
            sym.append(a)
            sym_l.append(f"sym{j}{k}")
            b = np.zeros((n, n), dtype=complex)
            b[j, k] = -1j
            b[k, j] = 1j
            asym.append(b)
            asym_l.append(f"asym{j}{k}")
    for l in range(1, n):
        d = np.zeros(n)
        d[:l] = 1
        d[l] = -l
        diag.append(np.sqrt(2 / (l * (l + 1))) * np.diag(d).astype(complex))
        diag_l.append(f"diag{l}")
    return GeneratorSet("su_n", np.stack(sym + asym + diag), tuple(sym_l + asym_l + diag_l))


def generator_set(kind: str, n: int) -> GeneratorSet:
    """Look up a family by name for a factor of dimension ``n``.

    ``kind`` is one of ``pauli`` (n = 2 only), ``spin`` (spin (n-1)/2),
    ``sun`` / ``su_n``, or ``auto`` (Pauli for qubits, spin otherwise).
    """
    if kind == "auto":
        kind = "pauli" if n == 2 else "spin"
    if kind == "pauli":
        if n != 2:
            raise ValueError(f"Pauli generators need a qubit factor, got dimension {n}")
        return pauli_set()
    if kind == "spin":
        return spin_set(Fraction(n - 1, 2))
    if kind in ("sun", "su_n"):
        return su_n_set(n)
    raise ValueError(f"unknown generator family {kind!r}")


def sets_for(dims: Sequence[int], kind: str = "sun") -> list[GeneratorSet]:
    return [generator_set(kind, n) for n in dims]


def embed(g: np.ndarray, ell: int, space: CompositeSpace) -> np.ndarray:
    """Full-space matrix of ``identity x ... x g x ... x identity``."""
    space.check_factor(ell)
    g = np.asarray(g, dtype=complex)
    n = space.dims[ell]
    if g.shape != (n, n):
        raise ValueError(f"factor {ell} has dimension {n}, operator has shape {g.shape}")
    before = int(np.prod(space.dims[:ell], dtype=int))
    after = int(np.prod(space.dims[ell + 1:], dtype=int))
    return np.kron(np.kron(np.eye(before), g), np.eye(after))


def apply_local(g: np.ndarray, ell: int, psi_tensor: np.ndarray) -> np.ndarray:
    """Act with a local matrix on axis ``ell`` of an amplitude tensor.

    Equivalent to ``embed(g, ell, space) @ psi`` without forming the
    full-space operator. ``g`` may carry a leading batch axis.
    """
    g = np.asarray(g)
    out = np.tensordot(g, psi_tensor, axes=([g.ndim - 1], [ell]))
    # tensordot puts g's output axis (after any batch axes) in front
    return np.moveaxis(out, g.ndim - 2, g.ndim - 2 + ell)
