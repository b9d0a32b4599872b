from __future__ import annotations

from dataclasses import dataclass

from pauli_universality.errors import QubitCountMismatchError

# Letter for (x, z) bit pairs, indexed by x + 2 * z.
_LETTERS = "IXZY"
_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
# Lexicographic rank I < X < Y < Z.
_RANK = {"I": 0, "X": 1, "Y": 2, "Z": 3}
_PHASE_PREFIXES = ("+", "+i", "-", "-i")
_PREFIX_PHASES = {"": 0, "+": 0, "+i": 1, "i": 1, "-": 2, "-i": 3}


@dataclass(frozen=True, slots=True)
class PhasedPauli:
    """An n-qubit Pauli string times a power of i.

    Bit ``q`` of ``x_mask``/``z_mask`` describes qubit ``q``; qubit 0 is the
    leftmost letter of the label. Y is stored as x=z=1 and means the
    Hermitian Y, so ``i**phase_exp`` is the whole phase.
    """

    num_qubits: int
    x_mask: int
    z_mask: int
    phase_exp: int = 0

    def __post_init__(self) -> None:
        if self.num_qubits < 1:
            raise ValueError(f"num_qubits must be positive, got {self.num_qubits}")
        limit = 1 << self.num_qubits
        if not (0 <= self.x_mask < limit and 0 <= self.z_mask < limit):
            raise ValueError(f"masks do not fit in {self.num_qubits} qubits")
        if not 0 <= self.phase_exp < 4:
            object.__setattr__(self, "phase_exp", self.phase_exp % 4)

    @classmethod
    def from_label(cls, label: str) -> PhasedPauli:
        """Parse ``"XIZ"``, ``"-XIZ"`` or ``"+iXIZ"`` style labels."""
        text = label.strip()
        body = text.lstrip("+-i")
        prefix = text[: len(text) - len(body)]
        if prefix not in _PREFIX_PHASES:
            raise ValueError(f"invalid phase prefix {prefix!r} in {label!r}")
        if not body:
            raise ValueError(f"empty Pauli label {label!r}")
        x_mask = 0
        z_mask = 0
        for qubit, letter in enumerate(body):
            try:
                x_bit, z_bit = _BITS[letter]
            except KeyError:
                raise ValueError(f"invalid Pauli letter {letter!r} in {label!r}") from None
            x_mask |= x_bit << qubit
            z_mask |= z_bit << qubit
        return cls(len(body), x_mask, z_mask, _PREFIX_PHASES[prefix])

    @classmethod
    def identity(cls, num_qubits: int) -> PhasedPauli:
        return cls(num_qubits, 0, 0)

    @classmethod
    def single(cls, num_qubits: int, qubit: int, letter: str) -> PhasedPauli:
        if not 0 <= qubit < num_qubits:
            raise ValueError(f"qubit {qubit} out of range for {num_qubits} qubits")
        x_bit, z_bit = _BITS[letter]
        return cls(num_qubits, x_bit << qubit, z_bit << qubit)

    def letter(self, qubit: int) -> str:
        return _LETTERS[((self.x_mask >> qubit) & 1) + 2 * ((self.z_mask >> qubit) & 1)]

    @property
    def label(self) -> str:
        return "".join(self.letter(q) for q in range(self.num_qubits))

    @property
    def signed_label(self) -> str:
        return _PHASE_PREFIXES[self.phase_exp] + self.label

    @property
    def weight(self) -> int:
        return (self.x_mask | self.z_mask).bit_count()

    @property
    def parity(self) -> int:
        return self.weight & 1

    @property
    def support(self) -> tuple[int, ...]:
        mask = self.x_mask | self.z_mask
        return tuple(q for q in range(self.num_qubits) if (mask >> q) & 1)

    @property
    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0

    @property
    def key(self) -> int:
        """Dense index of the unsigned string, used by the closure tables."""
        return self.x_mask | (self.z_mask << self.num_qubits)

    @property
    def sort_key(self) -> tuple[int, ...]:
        return tuple(_RANK[self.letter(q)] for q in range(self.num_qubits))

    def unsigned(self) -> PhasedPauli:
        if self.phase_exp == 0:
            return self
        return PhasedPauli(self.num_qubits, self.x_mask, self.z_mask)

    def with_phase(self, phase_exp: int) -> PhasedPauli:
        return PhasedPauli(self.num_qubits, self.x_mask, self.z_mask, phase_exp)

    def __mul__(self, other: PhasedPauli) -> PhasedPauli:
        return pauli_mul(self, other)

    def __str__(self) -> str:
        return self.signed_label


def _require_same_size(a: PhasedPauli, b: PhasedPauli) -> None:
    if a.num_qubits != b.num_qubits:
        raise QubitCountMismatchError(a.num_qubits, b.num_qubits)


def pauli_mul(a: PhasedPauli, b: PhasedPauli) -> PhasedPauli:
    """Exact product ``a * b`` with its phase."""
    _require_same_size(a, b)
    x = a.x_mask ^ b.x_mask
    z = a.z_mask ^ b.z_mask
    # Count i-factors of the Y letters in and out, then the 2 from moving
    # every Z of `a` past an X of `b`.
    phase = (
        a.phase_exp
        + b.phase_exp
        + (a.x_mask & a.z_mask).bit_count()
        + (b.x_mask & b.z_mask).bit_count()
        + 2 * (a.z_mask & b.x_mask).bit_count()
        - (x & z).bit_count()
    )
    return PhasedPauli(a.num_qubits, x, z, phase % 4)


def symplectic_product(a: PhasedPauli, b: PhasedPauli) -> int:
    """Symplectic inner product of the bit vectors, 0 or 1."""
    _require_same_size(a, b)
    return ((a.x_mask & b.z_mask) ^ (a.z_mask & b.x_mask)).bit_count() & 1


def commutes(a: PhasedPauli, b: PhasedPauli) -> bool:
    """True when ``a`` and ``b`` commute, i.e. they anticommute on an even
    number of qubits."""
    _require_same_size(a, b)
    return (a.x_mask & b.z_mask).bit_count() % 2 == (a.z_mask & b.x_mask).bit_count() % 2
