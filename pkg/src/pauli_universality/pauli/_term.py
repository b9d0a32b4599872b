from __future__ import annotations

from dataclasses import dataclass

from pauli_universality.pauli._pauli import PhasedPauli, commutes, pauli_mul


@dataclass(frozen=True, slots=True)
class Term:
    """A real coefficient times an unsigned, non-identity Pauli string."""

    coefficient: float
    pauli: PhasedPauli

    def __post_init__(self) -> None:
        if self.pauli.phase_exp != 0:
            raise ValueError(f"term strings carry no phase, got {self.pauli.signed_label}")
        if self.pauli.is_identity:
            raise ValueError("identity terms are not allowed")
        object.__setattr__(self, "coefficient", float(self.coefficient))

    @classmethod
    def of(cls, coefficient: float, label: str) -> Term:
        return cls(coefficient, PhasedPauli.from_label(label))

    @property
    def label(self) -> str:
        return self.pauli.label

    @property
    def num_qubits(self) -> int:
        return self.pauli.num_qubits

    @property
    def weight(self) -> int:
        return self.pauli.weight

    @property
    def support(self) -> tuple[int, ...]:
        return self.pauli.support

    def scaled(self, factor: float) -> Term:
        return Term(self.coefficient * factor, self.pauli)

    def __str__(self) -> str:
        return f"{self.coefficient!r} {self.label}"


def commutator(a: Term, b: Term) -> Term | None:
    """``i[a, b]`` as a single term, or ``None`` when the strings commute.

    With ``a.pauli * b.pauli = i**k * s`` and k odd the result is
    ``2 * ca * cb * i**(k + 1) * s``, which is real.
    """
    if commutes(a.pauli, b.pauli):
        return None
    product = pauli_mul(a.pauli, b.pauli)
    sign = -1.0 if product.phase_exp == 1 else 1.0
    return Term(2.0 * a.coefficient * b.coefficient * sign, product.unsigned())
