"""Maximal entanglement through vanishing local generator expectations."""
from .states import (
    CompositeSpace,
    DensityMatrix,
    SliceFamily,
    StateVector,
    make_state,
    partial_trace,
    purity,
    read_state,
    slices,
    von_neumann_entropy,
    write_state,
)
from .generators import GeneratorSet, embed, pauli_set, spin_set, su_n_set
from .measurement import expectation, local_expectations, variance
from .certify import (
    CertReport,
    certify_generators,
    certify_marginals,
    certify_slices,
    verify_family_spin1,
    verify_family_three_qubit,
    verify_family_two_qubit,
)
from .solver import SolveOptions, SolveResult, find_max_entangled, gradient, objective

__version__ = "0.1.0"
