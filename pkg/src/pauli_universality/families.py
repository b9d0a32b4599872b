"""Named Hamiltonian families."""

from __future__ import annotations

from itertools import combinations

from pauli_universality.errors import ConfigError
from pauli_universality.hamiltonian import Hamiltonian, parse_hamiltonian
from pauli_universality.pauli import PhasedPauli, Term

# Unit-coefficient Pauli expansions of |GHZ><GHZ| and |GHZ><000| + h.c.,
# up to overall scale.
GHZ_PROJECTOR_TEXT = """\
qubits: 3
1 III
1 ZZI
1 ZIZ
1 IZZ
-1 XYY
-1 YXY
-1 YYX
"""

GHZ_PRIME_TEXT = """\
qubits: 3
1 III
1 ZII
1 IZI
1 IIZ
1 ZZI
1 ZIZ
1 IZZ
1 ZZZ
-1 XXX
"""


def _x_on(num_qubits: int, qubits: tuple[int, ...]) -> Term:
    mask = sum(1 << q for q in qubits)
    return Term(1.0, PhasedPauli(num_qubits, mask, 0))


def chain_family(num_qubits: int) -> Hamiltonian:
    """3-local chain: X_i X_{i+1} and X_i X_{i+1} X_{i+2}; 2n - 3 terms."""
    if num_qubits < 2:
        raise ConfigError(f"the chain needs at least 2 qubits, got {num_qubits}")
    terms = [_x_on(num_qubits, (q, q + 1)) for q in range(num_qubits - 1)]
    terms.extend(_x_on(num_qubits, (q, q + 1, q + 2)) for q in range(num_qubits - 2))
    return Hamiltonian.from_terms(num_qubits, terms)


def complete_family(num_qubits: int) -> Hamiltonian:
    """X on every subset of at least two qubits; 2**n - n - 1 terms."""
    if num_qubits < 2:
        raise ConfigError(f"the family needs at least 2 qubits, got {num_qubits}")
    return Hamiltonian.from_terms(
        num_qubits,
        (
            _x_on(num_qubits, subset)
            for size in range(2, num_qubits + 1)
            for subset in combinations(range(num_qubits), size)
        ),
    )


def ghz_projector() -> Hamiltonian:
    return parse_hamiltonian(GHZ_PROJECTOR_TEXT)


def ghz_prime() -> Hamiltonian:
    return parse_hamiltonian(GHZ_PRIME_TEXT)


def is_k_local(h: Hamiltonian, k: int, floor: float = 0.0) -> bool:
    """Every term couples at most ``k`` qubits with ``|coefficient| >= floor``."""
    return all(term.weight <= k and abs(term.coefficient) >= floor for term in h.terms)


FAMILIES = {
    "chain": chain_family,
    "complete": complete_family,
}
