from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cache

from pauli_universality.errors import QubitCountMismatchError
from pauli_universality.pauli._pauli import PhasedPauli, pauli_mul

_AXES = ("X", "Y", "Z")


def _single_product(a: str, b: str) -> tuple[int, str]:
    product = pauli_mul(PhasedPauli.from_label(a), PhasedPauli.from_label(b))
    return product.phase_exp, product.label


@dataclass(frozen=True, slots=True)
class SingleQubitClifford:
    """A single-qubit Clifford stored as the signed images of X and Z.

    Images are written ``"+Z"`` or ``"-Y"``. The image of Y follows from
    Y = iXZ.
    """

    image_of_x: str
    image_of_z: str

    def __post_init__(self) -> None:
        for image in (self.image_of_x, self.image_of_z):
            if len(image) != 2 or image[0] not in "+-" or image[1] not in _AXES:
                raise ValueError(f"invalid Clifford image {image!r}")
        if self.image_of_x[1] == self.image_of_z[1]:
            raise ValueError(
                f"images {self.image_of_x} and {self.image_of_z} commute; not a Clifford"
            )

    @classmethod
    def from_text(cls, text: str) -> SingleQubitClifford:
        if len(text) == 1:
            return PAULI_CLIFFORDS[text]
        if len(text) != 4:
            raise ValueError(f"invalid Clifford text {text!r}")
        return cls(text[:2], text[2:])

    @property
    def text(self) -> str:
        return self.image_of_x + self.image_of_z

    def apply(self, letter: str) -> tuple[int, str]:
        """Image of a bare letter as ``(phase_exp, letter)`` with phase 0 or 2."""
        if letter == "I":
            return 0, "I"
        if letter == "X":
            return _signed(self.image_of_x)
        if letter == "Z":
            return _signed(self.image_of_z)
        if letter == "Y":
            sign_x, axis_x = _signed(self.image_of_x)
            sign_z, axis_z = _signed(self.image_of_z)
            phase, axis = _single_product(axis_x, axis_z)
            return (1 + sign_x + sign_z + phase) % 4, axis
        raise ValueError(f"invalid Pauli letter {letter!r}")

    def compose(self, after: SingleQubitClifford) -> SingleQubitClifford:
        """The Clifford that applies ``self`` first, then ``after``."""
        return SingleQubitClifford(
            _image_through(self.image_of_x, after), _image_through(self.image_of_z, after)
        )

    def inverse(self) -> SingleQubitClifford:
        for candidate in all_single_qubit_cliffords():
            if self.compose(candidate) == IDENTITY_CLIFFORD:
                return candidate
        raise AssertionError(f"no inverse for {self.text}")  # pragma: no cover

    @property
    def pauli_letter(self) -> str | None:
        """The Pauli this Clifford conjugates by, when it is one."""
        for letter, clifford in PAULI_CLIFFORDS.items():
            if clifford == self:
                return letter
        return None


def _signed(image: str) -> tuple[int, str]:
    return (0 if image[0] == "+" else 2), image[1]


def _image_through(image: str, after: SingleQubitClifford) -> str:
    sign, axis = _signed(image)
    phase, mapped = after.apply(axis)
    return ("+" if (sign + phase) % 4 == 0 else "-") + mapped


IDENTITY_CLIFFORD = SingleQubitClifford("+X", "+Z")

PAULI_CLIFFORDS = {
    "I": IDENTITY_CLIFFORD,
    "X": SingleQubitClifford("+X", "-Z"),
    "Y": SingleQubitClifford("-X", "-Z"),
    "Z": SingleQubitClifford("-X", "+Z"),
}


@cache
def all_single_qubit_cliffords() -> tuple[SingleQubitClifford, ...]:
    """The 24 single-qubit Cliffords modulo phase, identity first."""
    x_images = ("+X", "+Y", "+Z", "-X", "-Y", "-Z")
    z_images = ("+Z", "+X", "+Y", "-Z", "-X", "-Y")
    return tuple(
        SingleQubitClifford(image_x, image_z)
        for image_x in x_images
        for image_z in z_images
        if image_x[1] != image_z[1]
    )


def clifford_mapping(source: str, target: str, *, negate: bool = False) -> SingleQubitClifford:
    """First Clifford (in enumeration order) sending axis ``source`` to
    ``+target``, or to ``-target`` when ``negate`` is set."""
    wanted = (2 if negate else 0, target)
    for clifford in all_single_qubit_cliffords():
        if clifford.apply(source) == wanted:
            return clifford
    raise ValueError(f"no Clifford maps {source!r} to {target!r}")


@dataclass(frozen=True, slots=True)
class CliffordLayer:
    """One single-qubit Clifford per qubit, applied simultaneously."""

    cliffords: tuple[SingleQubitClifford, ...]
    # Pauli-only layers conjugate in O(1) per string; cached here.
    pauli: PhasedPauli | None = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.cliffords:
            raise ValueError("a layer needs at least one qubit")
        letters = [c.pauli_letter for c in self.cliffords]
        pauli = None
        if all(letter is not None for letter in letters):
            pauli = PhasedPauli.from_label("".join(letters))  # type: ignore[arg-type]
        object.__setattr__(self, "pauli", pauli)

    @classmethod
    def identity(cls, num_qubits: int) -> CliffordLayer:
        return cls((IDENTITY_CLIFFORD,) * num_qubits)

    @classmethod
    def from_pauli(cls, pauli: PhasedPauli | str) -> CliffordLayer:
        label = pauli if isinstance(pauli, str) else pauli.label
        return cls(tuple(PAULI_CLIFFORDS[letter] for letter in label))

    @classmethod
    def single(cls, num_qubits: int, qubit: int, clifford: SingleQubitClifford) -> CliffordLayer:
        cliffords = [IDENTITY_CLIFFORD] * num_qubits
        cliffords[qubit] = clifford
        return cls(tuple(cliffords))

    @classmethod
    def from_mapping(
        cls, num_qubits: int, per_qubit: Iterable[tuple[int, SingleQubitClifford]]
    ) -> CliffordLayer:
        cliffords = [IDENTITY_CLIFFORD] * num_qubits
        for qubit, clifford in per_qubit:
            cliffords[qubit] = clifford
        return cls(tuple(cliffords))

    @classmethod
    def from_text(cls, text: Sequence[str] | str) -> CliffordLayer:
        """Inverse of :attr:`text`: a Pauli label or per-qubit ``"+Z+X"`` items."""
        if isinstance(text, str):
            return cls.from_pauli(text)
        return cls(tuple(SingleQubitClifford.from_text(item) for item in text))

    @property
    def num_qubits(self) -> int:
        return len(self.cliffords)

    @property
    def is_pauli(self) -> bool:
        return self.pauli is not None

    @property
    def is_identity(self) -> bool:
        return all(c == IDENTITY_CLIFFORD for c in self.cliffords)

    @property
    def text(self) -> str | list[str]:
        if self.pauli is not None:
            return self.pauli.label
        return [c.text for c in self.cliffords]

    def compose(self, after: CliffordLayer) -> CliffordLayer:
        if after.num_qubits != self.num_qubits:
            raise QubitCountMismatchError(self.num_qubits, after.num_qubits)
        return CliffordLayer(
            tuple(c.compose(a) for c, a in zip(self.cliffords, after.cliffords, strict=True))
        )

    def inverse(self) -> CliffordLayer:
        if self.pauli is not None:
            return self
        return CliffordLayer(tuple(c.inverse() for c in self.cliffords))


def conjugate(pauli: PhasedPauli, layer: CliffordLayer) -> PhasedPauli:
    """Image of ``pauli`` under the layer, with its sign."""
    if layer.num_qubits != pauli.num_qubits:
        raise QubitCountMismatchError(pauli.num_qubits, layer.num_qubits)
    if layer.pauli is not None:
        anticommuting = (
            (pauli.x_mask & layer.pauli.z_mask).bit_count()
            + (pauli.z_mask & layer.pauli.x_mask).bit_count()
        ) & 1
        return pauli.with_phase(pauli.phase_exp + 2 * anticommuting)
    phase = pauli.phase_exp
    x_mask = 0
    z_mask = 0
    for qubit in pauli.support:
        image_phase, letter = layer.cliffords[qubit].apply(pauli.letter(qubit))
        phase += image_phase
        if letter in "XY":
            x_mask |= 1 << qubit
        if letter in "YZ":
            z_mask |= 1 << qubit
    return PhasedPauli(pauli.num_qubits, x_mask, z_mask, phase % 4)
