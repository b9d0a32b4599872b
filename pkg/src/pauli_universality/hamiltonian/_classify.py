from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from pauli_universality.hamiltonian._connectivity import connected_components
from pauli_universality.hamiltonian._model import Hamiltonian, Support


class ClassificationKind(str, Enum):
    NOT_ENTANGLING = "not_entangling"
    ODD_ENTANGLING = "odd_entangling"
    UNIVERSAL = "universal"


class AlgebraKind(str, Enum):
    """Which classical Lie algebra the closure spans."""

    SU = "su"
    SO = "so"
    SP = "sp"


def algebra_dimension(num_qubits: int, kind: str) -> int:
    """Dimension of the closure algebra: ``"universal"`` or ``"odd"``."""
    if num_qubits < 1:
        raise ValueError(f"num_qubits must be positive, got {num_qubits}")
    if kind == "universal":
        return 4**num_qubits - 1
    if kind == "odd":
        return (4**num_qubits - (-2) ** num_qubits) // 2
    raise ValueError(f"unknown algebra class {kind!r}")


@dataclass(frozen=True, slots=True)
class Classification:
    kind: ClassificationKind
    num_qubits: int
    components: tuple[Support, ...]
    algebra: AlgebraKind | None = None
    dimension: int | None = None

    @property
    def summary(self) -> str:
        if self.kind is ClassificationKind.NOT_ENTANGLING:
            groups = ", ".join("{" + ",".join(map(str, c)) + "}" for c in self.components)
            return f"not entangling: components {groups}"
        assert self.algebra is not None
        return (
            f"{self.kind.value}: {self.algebra.value}({2**self.num_qubits}), "
            f"dimension {self.dimension}"
        )

    def to_dict(self) -> dict[str, object]:
        return {
            "kind": self.kind.value,
            "num_qubits": self.num_qubits,
            "components": [list(c) for c in self.components],
            "algebra": self.algebra.value if self.algebra else None,
            "dimension": self.dimension,
        }


def classify(h: Hamiltonian) -> Classification:
    components = connected_components(h)
    n = h.num_qubits
    if len(components) > 1:
        return Classification(ClassificationKind.NOT_ENTANGLING, n, components)
    if any(term.weight % 2 == 0 for term in h.terms):
        return Classification(
            ClassificationKind.UNIVERSAL,
            n,
            components,
            AlgebraKind.SU,
            algebra_dimension(n, "universal"),
        )
    return Classification(
        ClassificationKind.ODD_ENTANGLING,
        n,
        components,
        AlgebraKind.SO if n % 2 == 0 else AlgebraKind.SP,
        algebra_dimension(n, "odd"),
    )
