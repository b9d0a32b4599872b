"""Hamiltonians as canonical sums of Pauli terms: model, text format,
connectivity and universality classification."""

from __future__ import annotations

from pauli_universality.hamiltonian._classify import (
    AlgebraKind,
    Classification,
    ClassificationKind,
    algebra_dimension,
    classify,
)
from pauli_universality.hamiltonian._connectivity import (
    DisjointSet,
    connected_components,
    enumerate_coupling_set,
    is_entangling,
)
from pauli_universality.hamiltonian._model import (
    ZERO_TOLERANCE,
    Hamiltonian,
    Support,
    conjugate_hamiltonian,
    hamiltonian_commutator,
)
from pauli_universality.hamiltonian._parser import (
    format_hamiltonian,
    load_hamiltonian,
    parse_hamiltonian,
)

__all__ = [
    "ZERO_TOLERANCE",
    "AlgebraKind",
    "Classification",
    "ClassificationKind",
    "DisjointSet",
    "Hamiltonian",
    "Support",
    "algebra_dimension",
    "classify",
    "conjugate_hamiltonian",
    "connected_components",
    "enumerate_coupling_set",
    "format_hamiltonian",
    "hamiltonian_commutator",
    "is_entangling",
    "load_hamiltonian",
    "parse_hamiltonian",
]
