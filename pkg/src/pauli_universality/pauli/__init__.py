"""Symplectic Pauli-string algebra and single-qubit Clifford layers.

The underscore-prefixed modules are private implementation details; import
only from ``pauli_universality.pauli`` itself.
"""

from __future__ import annotations

from pauli_universality.pauli._clifford import (
    IDENTITY_CLIFFORD,
    PAULI_CLIFFORDS,
    CliffordLayer,
    SingleQubitClifford,
    all_single_qubit_cliffords,
    clifford_mapping,
    conjugate,
)
from pauli_universality.pauli._pauli import (
    PhasedPauli,
    commutes,
    pauli_mul,
    symplectic_product,
)
from pauli_universality.pauli._term import Term, commutator

__all__ = [
    "IDENTITY_CLIFFORD",
    "PAULI_CLIFFORDS",
    "CliffordLayer",
    "PhasedPauli",
    "SingleQubitClifford",
    "Term",
    "all_single_qubit_cliffords",
    "clifford_mapping",
    "commutator",
    "commutes",
    "conjugate",
    "pauli_mul",
    "symplectic_product",
]
