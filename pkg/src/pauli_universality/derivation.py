"""Derivation trees: how an effective Hamiltonian is built from resources.

Leaves are terms of the given Hamiltonian (:class:`Given`) or free local
Paulis (:class:`LocalPauli`). Internal nodes conjugate, commute, combine,
rescale or isolate. Every node caches its effective Hamiltonian, recomputed
exactly from its children when the node is built.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterator, Mapping
from dataclasses import dataclass, field
from typing import Any, ClassVar

from pauli_universality.errors import (
    DerivationError,
    QubitCountMismatchError,
    SynthesisError,
)
from pauli_universality.hamiltonian import (
    Hamiltonian,
    conjugate_hamiltonian,
    hamiltonian_commutator,
)
from pauli_universality.isolation import (
    Schedule,
    apply_schedule_symbolic,
    schedule_from_json,
    schedule_to_json,
)
from pauli_universality.pauli import (
    CliffordLayer,
    PhasedPauli,
    Term,
    clifford_mapping,
    commutator,
)

FORMAT_NAME = "pauli-universality/derivation"
FORMAT_VERSION = 1


class DerivationNode:
    kind: ClassVar[str] = ""
    hamiltonian: Hamiltonian

    @property
    def children(self) -> tuple[DerivationNode, ...]:
        return ()

    @property
    def num_qubits(self) -> int:
        return self.hamiltonian.num_qubits

    def recompute(self) -> Hamiltonian:
        raise NotImplementedError

    def _cache(self) -> None:
        object.__setattr__(self, "hamiltonian", self.recompute())


def _hamiltonian_field() -> Any:
    return field(init=False, repr=False, compare=False)


@dataclass(frozen=True, eq=False)
class Given(DerivationNode):
    kind: ClassVar[str] = "given"
    term: Term
    hamiltonian: Hamiltonian = _hamiltonian_field()

    def __post_init__(self) -> None:
        self._cache()

    def recompute(self) -> Hamiltonian:
        return Hamiltonian.single(self.term)


@dataclass(frozen=True, eq=False)
class LocalPauli(DerivationNode):
    kind: ClassVar[str] = "local"
    pauli: PhasedPauli
    hamiltonian: Hamiltonian = _hamiltonian_field()

    def __post_init__(self) -> None:
        if self.pauli.weight != 1 or self.pauli.phase_exp != 0:
            raise DerivationError(f"{self.pauli.signed_label} is not a weight-1 string")
        self._cache()

    def recompute(self) -> Hamiltonian:
        return Hamiltonian.single(Term(1.0, self.pauli))


@dataclass(frozen=True, eq=False)
class Conjugate(DerivationNode):
    kind: ClassVar[str] = "conjugate"
    child: DerivationNode
    layer: CliffordLayer
    hamiltonian: Hamiltonian = _hamiltonian_field()

    def __post_init__(self) -> None:
        if self.layer.num_qubits != self.child.num_qubits:
            raise QubitCountMismatchError(self.child.num_qubits, self.layer.num_qubits)
        self._cache()

    @property
    def children(self) -> tuple[DerivationNode, ...]:
        return (self.child,)

    def recompute(self) -> Hamiltonian:
        return conjugate_hamiltonian(self.child.hamiltonian, self.layer)


@dataclass(frozen=True, eq=False)
class Commutator(DerivationNode):
    kind: ClassVar[str] = "commutator"
    left: DerivationNode
    right: DerivationNode
    hamiltonian: Hamiltonian = _hamiltonian_field()

    def __post_init__(self) -> None:
        self._cache()

    @property
    def children(self) -> tuple[DerivationNode, ...]:
        return (self.left, self.right)

    def recompute(self) -> Hamiltonian:
        return hamiltonian_commutator(self.left.hamiltonian, self.right.hamiltonian)


@dataclass(frozen=True, eq=False)
class Combine(DerivationNode):
    kind: ClassVar[str] = "combine"
    parts: tuple[DerivationNode, ...]
    weights: tuple[float, ...]
    hamiltonian: Hamiltonian = _hamiltonian_field()

    def __post_init__(self) -> None:
        if not self.parts or len(self.parts) != len(self.weights):
            raise DerivationError("combine needs one weight per child and at least one child")
        self._cache()

    @property
    def children(self) -> tuple[DerivationNode, ...]:
        return self.parts

    def recompute(self) -> Hamiltonian:
        total = Hamiltonian(self.parts[0].num_qubits)
        for part, weight in zip(self.parts, self.weights, strict=True):
            total = total.add(part.hamiltonian.scale(weight))
        return total


@dataclass(frozen=True, eq=False)
class Rescale(DerivationNode):
    kind: ClassVar[str] = "rescale"
    child: DerivationNode
    factor: float
    hamiltonian: Hamiltonian = _hamiltonian_field()

    def __post_init__(self) -> None:
        if not (self.factor > 0 and math.isfinite(self.factor)):
            raise DerivationError(f"rescale factor must be positive, got {self.factor}")
        self._cache()

    @property
    def children(self) -> tuple[DerivationNode, ...]:
        return (self.child,)

    def recompute(self) -> Hamiltonian:
        return self.child.hamiltonian.scale(self.factor)


@dataclass(frozen=True, eq=False)
class Isolate(DerivationNode):
    kind: ClassVar[str] = "isolate"
    source: Hamiltonian
    schedule: Schedule
    hamiltonian: Hamiltonian = _hamiltonian_field()

    def __post_init__(self) -> None:
        self._cache()

    def recompute(self) -> Hamiltonian:
        return apply_schedule_symbolic(self.source, self.schedule)


def iter_nodes(tree: DerivationNode) -> Iterator[DerivationNode]:
    """Post-order walk visiting each distinct node once."""
    seen: set[int] = set()
    stack: list[tuple[DerivationNode, bool]] = [(tree, False)]
    while stack:
        node, expanded = stack.pop()
        if id(node) in seen:
            continue
        if expanded:
            seen.add(id(node))
            yield node
            continue
        stack.append((node, True))
        stack.extend((child, False) for child in reversed(node.children))


def depth(tree: DerivationNode) -> int:
    depths: dict[int, int] = {}
    for node in iter_nodes(tree):
        depths[id(node)] = 1 + max((depths[id(c)] for c in node.children), default=0)
    return depths[id(tree)]


def count_commutators(tree: DerivationNode) -> int:
    return sum(1 for node in iter_nodes(tree) if isinstance(node, Commutator))


def effective_term(node: DerivationNode) -> Term:
    """The single term of a node's effective Hamiltonian."""
    if len(node.hamiltonian) != 1:
        raise DerivationError(
            f"expected a single-term node, got {len(node.hamiltonian)} terms: {node.hamiltonian}"
        )
    return node.hamiltonian.terms[0]


def replay(tree: DerivationNode, *, tolerance: float = 1e-12) -> Hamiltonian:
    """Recompute every node from its children and check the cached values."""
    for node in iter_nodes(tree):
        recomputed = node.recompute()
        if not recomputed.is_close(node.hamiltonian, tolerance):
            raise DerivationError(
                f"{node.kind} node replays to {recomputed}, cached {node.hamiltonian}"
            )
    return tree.hamiltonian


def rebuild(
    tree: DerivationNode, visit: Callable[[DerivationNode], DerivationNode | None]
) -> DerivationNode:
    """Copy a tree bottom-up. ``visit`` sees each node with its children
    already rebuilt and returns a replacement, or ``None`` to keep it."""
    rebuilt: dict[int, DerivationNode] = {}
    for node in iter_nodes(tree):
        node_children = node.children
        new_children = tuple(rebuilt[id(c)] for c in node_children)
        current = node
        if any(new is not old for new, old in zip(new_children, node_children, strict=True)):
            current = _with_children(node, new_children)
        replacement = visit(current)
        rebuilt[id(node)] = current if replacement is None else replacement
    return rebuilt[id(tree)]


def _with_children(node: DerivationNode, children: tuple[DerivationNode, ...]) -> DerivationNode:
    if isinstance(node, Conjugate):
        return Conjugate(children[0], node.layer)
    if isinstance(node, Commutator):
        return Commutator(children[0], children[1])
    if isinstance(node, Combine):
        return Combine(children, node.weights)
    if isinstance(node, Rescale):
        return Rescale(children[0], node.factor)
    raise DerivationError(f"{node.kind} nodes have no children")  # pragma: no cover


def conjugate_to(node: DerivationNode, letters: Mapping[int, str]) -> DerivationNode:
    """Conjugate a single-term node so qubit ``q`` carries ``letters[q]``,
    keeping the coefficient. Qubits not named keep their letter."""
    pauli = effective_term(node).pauli
    per_qubit = []
    for qubit, wanted in letters.items():
        current = pauli.letter(qubit)
        if current == "I" or wanted == "I":
            raise DerivationError(f"cannot rotate {current} into {wanted} on qubit {qubit}")
        if current != wanted:
            per_qubit.append((qubit, clifford_mapping(current, wanted)))
    if not per_qubit:
        return node
    return Conjugate(node, CliffordLayer.from_mapping(node.num_qubits, per_qubit))


def positive_root(tree: DerivationNode, *, avoid: tuple[int, ...] = ()) -> DerivationNode:
    """Flip a negative single-term root by conjugating with one anticommuting
    single-qubit Pauli outside ``avoid``."""
    term = effective_term(tree)
    if term.coefficient > 0:
        return tree
    qubit = next((q for q in term.support if q not in avoid), None)
    if qubit is None:
        raise SynthesisError(f"cannot flip the sign of {term} outside qubits {avoid}")
    flip = "X" if term.pauli.letter(qubit) == "Z" else "Z"
    layer = CliffordLayer.from_pauli(PhasedPauli.single(tree.num_qubits, qubit, flip))
    return Conjugate(tree, layer)


def lower_local_commutators(tree: DerivationNode) -> DerivationNode:
    """Replace every commutator with a weight-1 operand by the exact
    equivalent ``Rescale(Conjugate(other, C), 2)``.

    ``i[c P, s_q]`` is ``±2c`` times P with its letter on qubit q rotated, so a
    single Clifford on q reproduces it without any product-formula cost.
    """

    def visit(node: DerivationNode) -> DerivationNode | None:
        if not isinstance(node, Commutator):
            return None
        if isinstance(node.right, LocalPauli) and len(node.left.hamiltonian) == 1:
            return _rotate(node.left, node.right.pauli, negate=False)
        if isinstance(node.left, LocalPauli) and len(node.right.hamiltonian) == 1:
            return _rotate(node.right, node.left.pauli, negate=True)
        return None

    lowered = rebuild(tree, visit)
    if not lowered.hamiltonian.is_close(tree.hamiltonian):
        raise DerivationError("lowering changed the effective Hamiltonian")  # pragma: no cover
    return lowered


def _rotate(other: DerivationNode, local: PhasedPauli, *, negate: bool) -> DerivationNode | None:
    pauli = effective_term(other).pauli
    unit = commutator(Term(1.0, pauli), Term(1.0, local))
    if unit is None:
        return None
    qubit = local.support[0]
    negative = (unit.coefficient < 0) != negate
    mapping = clifford_mapping(pauli.letter(qubit), unit.pauli.letter(qubit), negate=negative)
    layer = CliffordLayer.single(other.num_qubits, qubit, mapping)
    return Rescale(Conjugate(other, layer), 2.0)


def _hamiltonian_to_json(h: Hamiltonian) -> dict[str, Any]:
    return {"qubits": h.num_qubits, "terms": [[t.coefficient, t.label] for t in h.terms]}


def _hamiltonian_from_json(data: Mapping[str, Any]) -> Hamiltonian:
    return Hamiltonian.from_terms(
        int(data["qubits"]), ((float(c), str(label)) for c, label in data["terms"])
    )


def _node_to_json(node: DerivationNode) -> dict[str, Any]:
    payload: dict[str, Any] = {"type": node.kind}
    if isinstance(node, Given):
        payload["term"] = [node.term.coefficient, node.term.label]
    elif isinstance(node, LocalPauli):
        payload["pauli"] = node.pauli.label
    elif isinstance(node, Conjugate):
        payload["layer"] = [c.text for c in node.layer.cliffords]
        payload["child"] = _node_to_json(node.child)
    elif isinstance(node, Commutator):
        payload["left"] = _node_to_json(node.left)
        payload["right"] = _node_to_json(node.right)
    elif isinstance(node, Combine):
        payload["weights"] = list(node.weights)
        payload["children"] = [_node_to_json(part) for part in node.parts]
    elif isinstance(node, Rescale):
        payload["factor"] = node.factor
        payload["child"] = _node_to_json(node.child)
    elif isinstance(node, Isolate):
        payload["source"] = _hamiltonian_to_json(node.source)
        payload["schedule"] = schedule_to_json(node.schedule)
    payload["hamiltonian"] = _hamiltonian_to_json(node.hamiltonian)
    return payload


def _node_from_json(data: Mapping[str, Any]) -> DerivationNode:
    kind = data.get("type")
    node: DerivationNode
    if kind == Given.kind:
        coefficient, label = data["term"]
        node = Given(Term.of(float(coefficient), str(label)))
    elif kind == LocalPauli.kind:
        node = LocalPauli(PhasedPauli.from_label(str(data["pauli"])))
    elif kind == Conjugate.kind:
        node = Conjugate(_node_from_json(data["child"]), CliffordLayer.from_text(data["layer"]))
    elif kind == Commutator.kind:
        node = Commutator(_node_from_json(data["left"]), _node_from_json(data["right"]))
    elif kind == Combine.kind:
        node = Combine(
            tuple(_node_from_json(child) for child in data["children"]),
            tuple(float(w) for w in data["weights"]),
        )
    elif kind == Rescale.kind:
        node = Rescale(_node_from_json(data["child"]), float(data["factor"]))
    elif kind == Isolate.kind:
        node = Isolate(
            _hamiltonian_from_json(data["source"]), schedule_from_json(data["schedule"])
        )
    else:
        raise DerivationError(f"unknown node type {kind!r}")
    if "hamiltonian" in data:
        stored = _hamiltonian_from_json(data["hamiltonian"])
        if not stored.is_close(node.hamiltonian):
            raise DerivationError(
                f"{kind} node replays to {node.hamiltonian}, file says {stored}"
            )
    return node


def tree_to_json(tree: DerivationNode, **metadata: Any) -> dict[str, Any]:
    return {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "num_qubits": tree.num_qubits,
        **metadata,
        "root": _node_to_json(tree),
    }


def tree_from_json(data: Mapping[str, Any]) -> DerivationNode:
    """Rebuild a tree, replaying every node against its stored Hamiltonian."""
    if data.get("format") != FORMAT_NAME:
        raise DerivationError(f"not a derivation document: format {data.get('format')!r}")
    if data.get("version") != FORMAT_VERSION:
        raise DerivationError(f"unsupported derivation version {data.get('version')!r}")
    try:
        return _node_from_json(data["root"])
    except DerivationError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise DerivationError(f"malformed derivation: {exc}") from exc
