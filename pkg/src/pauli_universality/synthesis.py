"""Constructive simulation of target couplings from a Hamiltonian.

Odd Hamiltonians reach exactly the odd-weight strings; the constructions
here go through an isolating set, a connected family of odd couplings in
which one qubit appears only once. That qubit can serve as an ancilla held
in |0>, which makes the remaining qubits fully universal.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from typing import NamedTuple

from pauli_universality.derivation import (
    Commutator,
    Conjugate,
    DerivationNode,
    Given,
    Isolate,
    LocalPauli,
    Rescale,
    conjugate_to,
    effective_term,
    iter_nodes,
    lower_local_commutators,
    positive_root,
    rebuild,
)
from pauli_universality.errors import (
    InvariantViolationError,
    IsolationError,
    SynthesisError,
)
from pauli_universality.hamiltonian import (
    ClassificationKind,
    DisjointSet,
    Hamiltonian,
    Support,
    classify,
)
from pauli_universality.isolation import Schedule, deterministic_isolation_schedule
from pauli_universality.lie_closure import (
    close,
    close_generators,
    extract_derivation,
    local_paulis,
)
from pauli_universality.pauli import PhasedPauli, Term, commutator

logger = logging.getLogger(__name__)

ANCILLA_STATE = "|0>"


@dataclass(frozen=True, eq=False)
class IsolatingCoupling:
    support: Support
    term_index: int
    derivation: DerivationNode
    reduced: bool

    @property
    def pauli(self) -> PhasedPauli:
        return effective_term(self.derivation).pauli


@dataclass(frozen=True, eq=False)
class IsolatingSet:
    num_qubits: int
    couplings: tuple[IsolatingCoupling, ...]
    isolated_qubit: int

    def occurrences(self, qubit: int) -> int:
        return sum(1 for coupling in self.couplings if qubit in coupling.support)

    def check(self) -> None:
        """Raise if the couplings do not form an isolating set."""
        covered = {q for c in self.couplings for q in c.support}
        if covered != set(range(self.num_qubits)):
            raise InvariantViolationError(f"couplings cover {sorted(covered)} only")
        if any(len(c.support) % 2 == 0 for c in self.couplings):
            raise InvariantViolationError("isolating couplings must have odd size")
        if self.occurrences(self.isolated_qubit) != 1:
            raise InvariantViolationError(
                f"qubit {self.isolated_qubit} appears in "
                f"{self.occurrences(self.isolated_qubit)} couplings"
            )
        components = DisjointSet(self.num_qubits)
        for coupling in self.couplings:
            for qubit in coupling.support[1:]:
                components.union(coupling.support[0], qubit)
        if len(components.groups()) != 1:
            raise InvariantViolationError("couplings are not connected")


@dataclass(frozen=True, eq=False)
class EncodedDerivation:
    tree: DerivationNode
    ancilla: int
    logical_qubits: tuple[int, ...]
    logical_target: PhasedPauli
    ancilla_state: str = ANCILLA_STATE

    @property
    def ancilla_letter(self) -> str:
        return effective_term(self.tree).pauli.letter(self.ancilla)


class CertificateStep(NamedTuple):
    """One hand-written step ``i[left, right] = coefficient * result``."""

    left: str
    right: str
    coefficient: float
    result: str


def _require_odd_entangling(h: Hamiltonian) -> None:
    kind = classify(h).kind
    if kind is ClassificationKind.NOT_ENTANGLING:
        raise SynthesisError("the Hamiltonian is not entangling")
    if kind is not ClassificationKind.ODD_ENTANGLING:
        raise SynthesisError("the Hamiltonian has an even-weight term; use derive_from_closure")


def _as_pauli(target: PhasedPauli | str, num_qubits: int) -> PhasedPauli:
    if isinstance(target, str):
        try:
            pauli = PhasedPauli.from_label(target)
        except ValueError as exc:
            raise SynthesisError(f"bad target: {exc}") from exc
    else:
        pauli = target.unsigned()
    if pauli.num_qubits != num_qubits:
        raise SynthesisError(f"target {pauli.label} is not on {num_qubits} qubits")
    if pauli.is_identity:
        raise SynthesisError("the identity is not a simulable coupling")
    return pauli


def reduce_odd_support(source: Term, target_support: Support) -> DerivationNode:
    """Shrink an odd coupling to an odd subset of its support.

    Each level conjugates the current coupling to X on every qubit and to
    ``X X Y ... Y`` with the X pair on two dropped qubits; their commutator
    is proportional to Z on the remaining qubits.
    """
    support = source.support
    target = tuple(sorted(set(target_support)))
    if source.weight % 2 == 0:
        raise SynthesisError(f"source {source.label} has even weight")
    if not target or len(target) % 2 == 0:
        raise SynthesisError(f"target support {target} must have odd size")
    if not set(target) <= set(support):
        raise SynthesisError(f"target support {target} is not inside {support}")

    node: DerivationNode = Given(source)
    current = support
    while current != target:
        dropped = sorted(set(current) - set(target))[:2]
        all_x = conjugate_to(node, dict.fromkeys(current, "X"))
        mixed = conjugate_to(node, {q: "X" if q in dropped else "Y" for q in current})
        node = positive_root(Commutator(all_x, mixed))
        current = tuple(q for q in current if q not in dropped)
    return positive_root(conjugate_to(node, dict.fromkeys(target, "Z")))


def find_isolating_set(h: Hamiltonian, *, start: int | None = None) -> IsolatingSet:
    """Walk from one term through overlapping terms that extend coverage.

    A term adding an even number of new qubits is reduced to keep one old
    qubit, an odd number to keep two, so every coupling stays odd and
    overlaps the previous one. The walk stops when nothing overlapping the
    last coupling extends coverage; a new qubit of that coupling is
    isolated. Terms that extend coverage elsewhere complete the set.
    """
    _require_odd_entangling(h)
    terms = h.terms
    first_index = 0 if start is None else start
    if not 0 <= first_index < len(terms):
        raise SynthesisError(f"start index {first_index} out of range")

    first = terms[first_index]
    couplings = [IsolatingCoupling(first.support, first_index, Given(first), reduced=False)]
    used = {first_index}
    covered = set(first.support)
    previous = set(first.support)
    newest = set(first.support)

    while True:
        candidate = next(
            (
                i
                for i, term in enumerate(terms)
                if i not in used and previous & set(term.support) and set(term.support) - covered
            ),
            None,
        )
        if candidate is None:
            break
        term = terms[candidate]
        extension = set(term.support) - covered
        anchors = sorted(set(term.support) & previous) + sorted(
            (set(term.support) & covered) - previous
        )
        keep = 1 if len(extension) % 2 == 0 else 2
        support = tuple(sorted(extension | set(anchors[:keep])))
        if support == term.support:
            coupling = IsolatingCoupling(support, candidate, Given(term), reduced=False)
        else:
            derivation = reduce_odd_support(term, support)
            coupling = IsolatingCoupling(support, candidate, derivation, reduced=True)
        couplings.append(coupling)
        used.add(candidate)
        covered |= extension
        previous = set(support)
        newest = extension

    isolated = max(newest)
    while len(covered) < h.num_qubits:
        index, term = next(
            (i, term)
            for i, term in enumerate(terms)
            if i not in used and covered & set(term.support) and set(term.support) - covered
        )
        couplings.append(IsolatingCoupling(term.support, index, Given(term), reduced=False))
        used.add(index)
        covered |= set(term.support)

    result = IsolatingSet(h.num_qubits, tuple(couplings), isolated)
    result.check()
    logger.debug(
        "isolating set from term %d: %d couplings, qubit %d isolated",
        first_index,
        len(couplings),
        isolated,
    )
    return result


def _assert_odd(tree: DerivationNode) -> None:
    for node in iter_nodes(tree):
        if any(term.weight % 2 == 0 for term in node.hamiltonian.terms):
            raise InvariantViolationError(f"{node.kind} node has an even-weight term")


def derive_odd_target(h: Hamiltonian, target: PhasedPauli | str) -> DerivationNode:
    _require_odd_entangling(h)
    pauli = _as_pauli(target, h.num_qubits)
    if pauli.weight % 2 == 0:
        raise SynthesisError(
            f"{pauli.label} has even weight; an odd Hamiltonian cannot simulate it"
        )
    index = h.index_of(pauli)
    if index is not None:
        return positive_root(Given(h.terms[index]))
    if pauli.weight == 1:
        return LocalPauli(pauli)

    isolating = find_isolating_set(h)
    leaves = {c.pauli: c.derivation for c in reversed(isolating.couplings)}
    closure = close_generators(h.num_qubits, [*leaves, *local_paulis(h.num_qubits)])
    tree = positive_root(lower_local_commutators(extract_derivation(closure, pauli, leaves=leaves)))
    _assert_odd(tree)
    return tree


def derive_from_closure(h: Hamiltonian, target: PhasedPauli | str) -> DerivationNode:
    """Generic route for any Hamiltonian: closure with local Paulis, then the
    recorded commutator chain."""
    pauli = _as_pauli(target, h.num_qubits)
    index = h.index_of(pauli)
    if index is not None:
        return positive_root(Given(h.terms[index]))
    closure = close(h, include_local_unitaries=True)
    if pauli not in closure:
        raise SynthesisError(f"{pauli.label} is outside the algebra generated by the Hamiltonian")
    return positive_root(lower_local_commutators(extract_derivation(closure, pauli)))


def _isolating_set_for_ancilla(h: Hamiltonian) -> IsolatingSet:
    last = h.num_qubits - 1
    for start in range(len(h.terms)):
        candidate = find_isolating_set(h, start=start)
        if candidate.isolated_qubit == last:
            return candidate
    return find_isolating_set(h)


def derive_encoded(h: Hamiltonian, target: PhasedPauli | str) -> EncodedDerivation:
    """Any coupling on the n-1 logical qubits, with the ancilla held in |0>.

    Even-weight targets are simulated as ``target (x) Z`` on the ancilla,
    odd ones as ``target (x) I``; every emitted evolution acts on the ancilla
    by I or Z only.
    """
    _require_odd_entangling(h)
    n = h.num_qubits
    logical_target = _as_pauli(target, n - 1)
    isolating = _isolating_set_for_ancilla(h)
    ancilla = isolating.isolated_qubit
    logical = tuple(q for q in range(n) if q != ancilla)

    letters = ["I"] * n
    for position, qubit in enumerate(logical):
        letters[qubit] = logical_target.letter(position)
    letters[ancilla] = "Z" if logical_target.weight % 2 == 0 else "I"
    physical = PhasedPauli.from_label("".join(letters))

    resources: dict[PhasedPauli, DerivationNode] = {}
    for coupling in reversed(isolating.couplings):
        node = coupling.derivation
        if ancilla in coupling.support:
            node = conjugate_to(node, {ancilla: "Z"})
        resources[effective_term(node).pauli] = node
    generators = [*resources, *(p for p in local_paulis(n) if p.letter(ancilla) == "I")]
    closure = close_generators(n, generators)
    if physical not in closure:
        raise SynthesisError(f"{physical.label} is not reachable with the ancilla fixed")
    raw = extract_derivation(closure, physical, leaves=resources)
    tree = positive_root(lower_local_commutators(raw), avoid=(ancilla,))
    _assert_ancilla_stationary(tree, ancilla, resources.values())
    logger.info("encoded %s as %s with ancilla %d", logical_target.label, physical.label, ancilla)
    return EncodedDerivation(tree, ancilla, logical, logical_target)


def _assert_ancilla_stationary(
    tree: DerivationNode, ancilla: int, resources: Iterable[DerivationNode]
) -> None:
    """Every node above the resource subtrees acts on the ancilla by I or Z."""
    resource_ids = {id(node) for node in resources}
    stack = [tree]
    while stack:
        node = stack.pop()
        for term in node.hamiltonian.terms:
            if term.pauli.letter(ancilla) not in "IZ":
                raise InvariantViolationError(
                    f"{node.kind} node acts on ancilla {ancilla} with {term.label}"
                )
        if id(node) not in resource_ids:
            stack.extend(node.children)


def certificate_tree(h: Hamiltonian, steps: Sequence[CertificateStep]) -> DerivationNode:
    """Check a hand-written commutator chain and return its tree.

    Step operands must be rotations of an available coupling: a term of
    ``h``, a weight-1 string, or an earlier step's result, matched by
    support.
    """
    if not steps:
        raise SynthesisError("a certificate needs at least one step")
    available: dict[PhasedPauli, DerivationNode] = {t.pauli: Given(t) for t in h.terms}

    def obtain(label: str, step_number: int) -> DerivationNode:
        pauli = _as_pauli(label, h.num_qubits)
        if pauli in available:
            return available[pauli]
        for known, node in available.items():
            if known.support == pauli.support:
                return conjugate_to(node, {q: pauli.letter(q) for q in pauli.support})
        if pauli.weight == 1:
            return LocalPauli(pauli)
        raise SynthesisError(f"step {step_number}: {label} is not available")

    node: DerivationNode | None = None
    for number, step in enumerate(steps, start=1):
        left = obtain(step.left, number)
        right = obtain(step.right, number)
        unit = commutator(
            Term(1.0, effective_term(left).pauli), Term(1.0, effective_term(right).pauli)
        )
        result = _as_pauli(step.result, h.num_qubits)
        if unit is None or unit.pauli != result or abs(unit.coefficient - step.coefficient) > 1e-12:
            found = "0" if unit is None else f"{unit.coefficient!r} {unit.label}"
            raise SynthesisError(
                f"step {number}: i[{step.left}, {step.right}] is {found}, "
                f"not {step.coefficient!r} {step.result}"
            )
        node = Commutator(left, right)
        available[result] = node
    assert node is not None
    return node


def expand_given_leaves(tree: DerivationNode, h: Hamiltonian) -> DerivationNode:
    """Replace each :class:`Given` leaf by an exact isolation of its term
    from the full Hamiltonian, so a compiled program only ever evolves
    ``h`` itself and local Paulis."""
    schedules: dict[PhasedPauli, tuple[Schedule, float]] = {}

    def visit(node: DerivationNode) -> DerivationNode | None:
        if not isinstance(node, Given):
            return None
        index = h.index_of(node.term.pauli)
        if index is None or h.terms[index].coefficient != node.term.coefficient:
            raise SynthesisError(f"leaf {node.term} is not a term of the Hamiltonian")
        if node.term.pauli not in schedules:
            try:
                schedule = deterministic_isolation_schedule(h, index, fix_sign=False)
            except IsolationError as exc:  # pragma: no cover
                raise SynthesisError(str(exc)) from exc
            schedules[node.term.pauli] = (schedule, 1.0 / schedule.scale)
        schedule, factor = schedules[node.term.pauli]
        undo = schedule.basis_change.inverse()
        return Rescale(Conjugate(Isolate(h, schedule), undo), factor)

    expanded = rebuild(tree, visit)
    if not expanded.hamiltonian.is_close(tree.hamiltonian):
        raise InvariantViolationError("expanding leaves changed the effective Hamiltonian")
    return expanded


def synthesize(h: Hamiltonian, target: PhasedPauli | str) -> DerivationNode:
    """Route a target through the construction matching the Hamiltonian's class."""
    if classify(h).kind is ClassificationKind.ODD_ENTANGLING:
        return derive_odd_target(h, target)
    return derive_from_closure(h, target)


def leaves_of(tree: DerivationNode) -> Mapping[str, int]:
    counts: dict[str, int] = {}
    for node in iter_nodes(tree):
        if not node.children:
            counts[node.kind] = counts.get(node.kind, 0) + 1
    return counts
