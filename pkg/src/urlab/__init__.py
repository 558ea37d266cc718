"""Numerics for uncertainty relations in finite-dimensional quantum mechanics."""
__version__ = "0.1.0"

from .hilbert import (  # noqa: E402
    KERNEL_BACKEND,
    Operator,
    Spectrum,
    State,
    basis_state,
    commutator,
    eigendecompose,
    evolve,
    expectation,
    make_hermitian,
    matrix_element,
    pauli_x,
    pauli_y,
    pauli_z,
    phase_state,
    random_hermitian,
    random_state,
    truncated_oscillator,
)

__all__ = [
    "KERNEL_BACKEND",
    "Operator",
    "Spectrum",
    "State",
    "basis_state",
    "commutator",
    "eigendecompose",
    "evolve",
    "expectation",
    "make_hermitian",
    "matrix_element",
    "pauli_x",
    "pauli_y",
    "pauli_z",
    "phase_state",
    "random_hermitian",
    "random_state",
    "truncated_oscillator",
]
