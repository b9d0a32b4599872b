from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Iterator
from dataclasses import dataclass

from pauli_universality.errors import InvariantViolationError, QubitCountMismatchError
from pauli_universality.pauli import CliffordLayer, PhasedPauli, Term, commutator, conjugate

# Coefficients this close to zero after merging are dropped.
ZERO_TOLERANCE = 1e-12

Support = tuple[int, ...]


@dataclass(frozen=True, slots=True)
class Hamiltonian:
    """Canonical sum of Pauli terms on ``num_qubits`` qubits.

    Terms are merged by string, near-zero coefficients are pruned and the
    rest is sorted lexicographically (I < X < Y < Z). Build instances with
    :meth:`from_terms`; the constructor trusts its input.
    """

    num_qubits: int
    terms: tuple[Term, ...] = ()

    @classmethod
    def from_terms(
        cls, num_qubits: int, terms: Iterable[Term | tuple[float, str]]
    ) -> Hamiltonian:
        merged: dict[PhasedPauli, float] = {}
        for item in terms:
            term = item if isinstance(item, Term) else Term.of(*item)
            if term.num_qubits != num_qubits:
                raise QubitCountMismatchError(num_qubits, term.num_qubits)
            merged[term.pauli] = merged.get(term.pauli, 0.0) + term.coefficient
        kept = [
            Term(coefficient, pauli)
            for pauli, coefficient in merged.items()
            if abs(coefficient) > ZERO_TOLERANCE
        ]
        kept.sort(key=lambda term: term.pauli.sort_key)
        return cls(num_qubits, tuple(kept))

    @classmethod
    def single(cls, term: Term) -> Hamiltonian:
        return cls.from_terms(term.num_qubits, [term])

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Term]:
        return iter(self.terms)

    @property
    def is_empty(self) -> bool:
        return not self.terms

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(term.label for term in self.terms)

    @property
    def supports(self) -> tuple[Support, ...]:
        return tuple(term.support for term in self.terms)

    def coefficient(self, label: str | PhasedPauli) -> float:
        pauli = PhasedPauli.from_label(label) if isinstance(label, str) else label
        for term in self.terms:
            if term.pauli == pauli:
                return term.coefficient
        return 0.0

    def index_of(self, label: str | PhasedPauli) -> int | None:
        pauli = PhasedPauli.from_label(label) if isinstance(label, str) else label
        for index, term in enumerate(self.terms):
            if term.pauli == pauli:
                return index
        return None

    def scale(self, factor: float) -> Hamiltonian:
        return Hamiltonian.from_terms(self.num_qubits, (t.scaled(factor) for t in self.terms))

    def add(self, other: Hamiltonian) -> Hamiltonian:
        if other.num_qubits != self.num_qubits:
            raise QubitCountMismatchError(self.num_qubits, other.num_qubits)
        return Hamiltonian.from_terms(self.num_qubits, (*self.terms, *other.terms))

    def is_close(self, other: Hamiltonian, tolerance: float = 1e-12) -> bool:
        """Same strings with coefficients equal up to a relative tolerance."""
        if self.num_qubits != other.num_qubits or self.labels != other.labels:
            return False
        return all(
            abs(a.coefficient - b.coefficient) <= tolerance * max(1.0, abs(a.coefficient))
            for a, b in zip(self.terms, other.terms, strict=True)
        )

    def parity_census(self) -> dict[str, object]:
        histogram = Counter(term.weight for term in self.terms)
        return {
            "odd_terms": sum(1 for term in self.terms if term.pauli.parity),
            "even_terms": sum(1 for term in self.terms if not term.pauli.parity),
            "weights": {str(weight): histogram[weight] for weight in sorted(histogram)},
        }

    def __str__(self) -> str:
        return " + ".join(str(term) for term in self.terms) or "0"


def hamiltonian_commutator(a: Hamiltonian, b: Hamiltonian) -> Hamiltonian:
    """``i[a, b]`` expanded bilinearly over the terms."""
    if a.num_qubits != b.num_qubits:
        raise QubitCountMismatchError(a.num_qubits, b.num_qubits)
    products = (commutator(left, right) for left in a.terms for right in b.terms)
    return Hamiltonian.from_terms(a.num_qubits, (t for t in products if t is not None))


def conjugate_hamiltonian(h: Hamiltonian, layer: CliffordLayer) -> Hamiltonian:
    """``L h L^dagger``; strings keep phase 0 or pick up a sign."""
    images = []
    for term in h.terms:
        image = conjugate(term.pauli, layer)
        if image.phase_exp % 2:
            raise InvariantViolationError(f"Clifford image of {term.label} is not Hermitian")
        sign = -1.0 if image.phase_exp == 2 else 1.0
        images.append(Term(term.coefficient * sign, image.unsigned()))
    return Hamiltonian.from_terms(h.num_qubits, images)
