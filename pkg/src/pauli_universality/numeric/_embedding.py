from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from pauli_universality.errors import NumericError
from pauli_universality.lie_closure import all_strings
from pauli_universality.numeric._dense import to_matrix
from pauli_universality.pauli import PhasedPauli

EMBEDDING_TOLERANCE = 1e-12


@dataclass(frozen=True, slots=True)
class LieEmbeddingReport:
    """Outcome of checking that ``i * sigma`` for odd strings sigma lands in
    so(2**n) (n even) or sp(2**n) (n odd) after a fixed change of basis."""

    num_qubits: int
    algebra: str
    odd_checked: int
    odd_passed: int
    even_checked: int
    even_rejected: int
    max_residual: float

    @property
    def passed(self) -> bool:
        return self.odd_passed == self.odd_checked and self.even_rejected == self.even_checked


def _y_string(count: int) -> np.ndarray:
    return to_matrix(PhasedPauli.from_label("Y" * count))


def check_lie_embedding(num_qubits: int) -> LieEmbeddingReport:
    """The involution ``f(A) = Y..Y A^T Y..Y`` fixes exactly the odd strings
    up to sign: ``f(i sigma) = -i sigma`` iff sigma has odd weight.

    For n even, ``U = (I - i Y..Y) / sqrt(2)`` turns that condition into
    ``B^T = -B`` with ``B = U^dagger A U``. For n odd, ``U = I (x) (I - i
    Y..Y) / sqrt(2)`` on the last n-1 qubits turns it into
    ``J^dagger B^T J = -B`` with ``J = Y (x) I``.
    """
    n = num_qubits
    if not 2 <= n <= 4:
        raise NumericError(f"embedding checks cover 2 to 4 qubits, got {n}")
    dim = 2**n
    identity = np.eye(dim, dtype=complex)
    y_all = _y_string(n)
    if n % 2 == 0:
        algebra = "so"
        basis = (identity - 1j * y_all) / np.sqrt(2)
        form = None
    else:
        algebra = "sp"
        rest = _y_string(n - 1)
        basis = np.kron(np.eye(2), (np.eye(dim // 2) - 1j * rest) / np.sqrt(2))
        form = to_matrix(PhasedPauli.from_label("Y" + "I" * (n - 1)))

    odd_checked = odd_passed = even_checked = even_rejected = 0
    max_residual = 0.0
    for pauli in sorted(all_strings(n), key=lambda p: p.sort_key):
        a = 1j * to_matrix(pauli)
        involution_residual = float(np.linalg.norm(y_all @ a.T @ y_all + a, 2))
        if not pauli.parity:
            even_checked += 1
            if involution_residual > EMBEDDING_TOLERANCE:
                even_rejected += 1
            continue
        b = basis.conj().T @ a @ basis
        if form is None:
            transpose_residual = float(np.linalg.norm(b.T + b, 2))
        else:
            transpose_residual = float(np.linalg.norm(form.conj().T @ b.T @ form + b, 2))
        anti_hermitian_residual = float(np.linalg.norm(b.conj().T + b, 2))
        residual = max(involution_residual, transpose_residual, anti_hermitian_residual)
        max_residual = max(max_residual, residual)
        odd_checked += 1
        if residual <= EMBEDDING_TOLERANCE:
            odd_passed += 1
    return LieEmbeddingReport(
        num_qubits=n,
        algebra=algebra,
        odd_checked=odd_checked,
        odd_passed=odd_passed,
        even_checked=even_checked,
        even_rejected=even_rejected,
        max_residual=max_residual,
    )
