"""Small-n dense-matrix checks of the symbolic engine.

The underscore-prefixed modules are private; import from
``pauli_universality.numeric``.
"""

from __future__ import annotations

from pauli_universality.numeric._compile import (
    MAX_COMPILE_QUBITS,
    EncodedReport,
    EvolutionStep,
    LadderRow,
    LayerStep,
    Step,
    TrotterParams,
    compile_derivation,
    encoded_report,
    fit_order,
    local_error_ladder,
    logical_hamiltonian,
    run_steps,
    trotter_ladder,
    verify,
)
from pauli_universality.numeric._dense import (
    MAX_MATRIX_QUBITS,
    clifford_unitary,
    evolve,
    layer_unitary,
    phase_aligned_distance,
    to_matrix,
)
from pauli_universality.numeric._embedding import LieEmbeddingReport, check_lie_embedding

__all__ = [
    "MAX_COMPILE_QUBITS",
    "MAX_MATRIX_QUBITS",
    "EncodedReport",
    "EvolutionStep",
    "LadderRow",
    "LayerStep",
    "LieEmbeddingReport",
    "Step",
    "TrotterParams",
    "check_lie_embedding",
    "clifford_unitary",
    "compile_derivation",
    "encoded_report",
    "evolve",
    "fit_order",
    "layer_unitary",
    "local_error_ladder",
    "logical_hamiltonian",
    "phase_aligned_distance",
    "run_steps",
    "to_matrix",
    "trotter_ladder",
    "verify",
]
