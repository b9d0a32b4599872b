from __future__ import annotations

from functools import cache, reduce

import numpy as np
import scipy.linalg

from pauli_universality.errors import NumericError
from pauli_universality.hamiltonian import Hamiltonian
from pauli_universality.pauli import (
    CliffordLayer,
    PhasedPauli,
    SingleQubitClifford,
    Term,
)

# Plain operator products; compiled derivations stop at MAX_COMPILE_QUBITS.
MAX_MATRIX_QUBITS = 8
HERMITIAN_TOLERANCE = 1e-12

_SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _check_size(num_qubits: int) -> None:
    if num_qubits > MAX_MATRIX_QUBITS:
        raise NumericError(
            f"dense matrices are limited to {MAX_MATRIX_QUBITS} qubits, got {num_qubits}"
        )


def _kron_all(factors: list[np.ndarray]) -> np.ndarray:
    return reduce(np.kron, factors)


def to_matrix(operator: PhasedPauli | Term | Hamiltonian) -> np.ndarray:
    """Dense matrix with qubit 0 as the most significant tensor factor."""
    if isinstance(operator, PhasedPauli):
        _check_size(operator.num_qubits)
        factors = [_SINGLE[letter] for letter in operator.label]
        return (1j**operator.phase_exp) * _kron_all(factors)
    if isinstance(operator, Term):
        return operator.coefficient * to_matrix(operator.pauli)
    _check_size(operator.num_qubits)
    dim = 2**operator.num_qubits
    matrix = np.zeros((dim, dim), dtype=complex)
    for term in operator.terms:
        matrix += to_matrix(term)
    return matrix


def evolve(h: np.ndarray, t: float) -> np.ndarray:
    """``exp(-i h t)`` through the Hermitian eigendecomposition."""
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise NumericError(f"expected a square matrix, got shape {h.shape}")
    if not np.allclose(h, h.conj().T, rtol=0.0, atol=HERMITIAN_TOLERANCE):
        raise NumericError("evolution needs a Hermitian matrix")
    eigenvalues, eigenvectors = scipy.linalg.eigh(h)
    return (eigenvectors * np.exp(-1j * t * eigenvalues)) @ eigenvectors.conj().T


@cache
def clifford_unitary(clifford: SingleQubitClifford) -> np.ndarray:
    """A 2x2 unitary ``U`` with ``U P U^dagger`` equal to the stored images.

    Summing ``image(P) Q P`` over the Paulis P gives ``2 tr(U^dagger Q) U``
    for any fixed Q; some Q in {I, X, Y, Z} makes that nonzero.
    """
    images = {}
    for letter in "IXYZ":
        phase, axis = clifford.apply(letter)
        images[letter] = (1j**phase) * _SINGLE[axis]
    best = None
    for anchor in _SINGLE.values():
        candidate = sum(images[letter] @ anchor @ _SINGLE[letter] for letter in "IXYZ")
        if best is None or np.linalg.norm(candidate) > np.linalg.norm(best):
            best = candidate
    assert best is not None
    scale = np.sqrt(abs(np.linalg.det(best)))
    return best / scale


def layer_unitary(layer: CliffordLayer) -> np.ndarray:
    _check_size(layer.num_qubits)
    if layer.pauli is not None:
        return to_matrix(layer.pauli)
    return _kron_all([clifford_unitary(c) for c in layer.cliffords])


def phase_aligned_distance(u: np.ndarray, v: np.ndarray) -> float:
    """``min over phi of ||u - e^{i phi} v||_2``, phase taken from ``tr(v^dagger u)``."""
    overlap = np.trace(v.conj().T @ u)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.linalg.norm(u - phase * v, 2))
