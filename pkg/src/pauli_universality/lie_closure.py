"""Lie closure of a set of Pauli strings under ``i[., .]``.

The commutator of two Pauli strings is zero or a scalar times one string,
so the algebra they generate has a basis of unsigned strings and the closure
is a fixpoint over strings alone. Signs come back when a derivation is
replayed.
"""

from __future__ import annotations

import logging
from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from enum import Enum
from itertools import product
from types import MappingProxyType

import numpy as np

from pauli_universality.derivation import (
    Commutator,
    DerivationNode,
    Given,
    LocalPauli,
    effective_term,
)
from pauli_universality.errors import ClosureError, InvariantViolationError
from pauli_universality.hamiltonian import Hamiltonian, algebra_dimension
from pauli_universality.pauli import PhasedPauli, Term

logger = logging.getLogger(__name__)

# Dense bookkeeping uses a 4**n table.
MAX_CLOSURE_QUBITS = 10


class ClosureAlgebra(str, Enum):
    SU = "su"
    SO = "so"
    SP = "sp"
    REDUCIBLE = "reducible"


@dataclass(frozen=True, eq=False)
class ClosureResult:
    num_qubits: int
    # Discovery order: generators first (sorted), then level by level.
    elements: tuple[PhasedPauli, ...]
    provenance: Mapping[PhasedPauli, tuple[PhasedPauli, PhasedPauli]]
    generators: frozenset[PhasedPauli]
    sources: Mapping[PhasedPauli, Term]
    levels: int

    @property
    def dimension(self) -> int:
        return len(self.elements)

    def __contains__(self, pauli: object) -> bool:
        if isinstance(pauli, PhasedPauli):
            pauli = pauli.unsigned()
            return pauli in self.provenance or pauli in self.generators
        return False

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(p.label for p in self.elements)

    @property
    def weight_histogram(self) -> dict[int, int]:
        counts = Counter(p.weight for p in self.elements)
        return {weight: counts[weight] for weight in sorted(counts)}

    @property
    def all_odd(self) -> bool:
        return all(p.parity for p in self.elements)

    @property
    def algebra(self) -> ClosureAlgebra:
        n = self.num_qubits
        if self.dimension == algebra_dimension(n, "universal"):
            return ClosureAlgebra.SU
        if self.all_odd and self.dimension == algebra_dimension(n, "odd"):
            return ClosureAlgebra.SO if n % 2 == 0 else ClosureAlgebra.SP
        return ClosureAlgebra.REDUCIBLE


def local_paulis(num_qubits: int) -> list[PhasedPauli]:
    return [
        PhasedPauli.single(num_qubits, q, letter) for q in range(num_qubits) for letter in "XYZ"
    ]


def close_generators(
    num_qubits: int,
    generators: Iterable[PhasedPauli],
    *,
    sources: Mapping[PhasedPauli, Term] | None = None,
) -> ClosureResult:
    """Breadth-first commutator fixpoint.

    Each level commutes the frontier, in lexicographic order, against the
    set as it stood when the level began. The first product to reach a
    string records its parents; new strings of one level keep discovery
    order and become the next frontier, sorted.
    """
    n = num_qubits
    if n > MAX_CLOSURE_QUBITS:
        raise ClosureError(f"closure is limited to {MAX_CLOSURE_QUBITS} qubits, got {n}")
    size = 1 << (2 * n)
    shift = np.uint64(n)
    seen = np.zeros(size, dtype=bool)
    xs = np.zeros(size, dtype=np.uint64)
    zs = np.zeros(size, dtype=np.uint64)
    elements: list[PhasedPauli] = []
    provenance: dict[PhasedPauli, tuple[PhasedPauli, PhasedPauli]] = {}

    def add(pauli: PhasedPauli) -> int:
        seen[pauli.key] = True
        xs[len(elements)] = pauli.x_mask
        zs[len(elements)] = pauli.z_mask
        elements.append(pauli)
        return len(elements) - 1

    unique = {g.unsigned() for g in generators if not g.is_identity}
    for pauli in unique:
        if pauli.num_qubits != n:
            raise ClosureError(f"generator {pauli.label} is not on {n} qubits")
    frontier = [add(p) for p in sorted(unique, key=lambda p: p.sort_key)]
    all_generators_odd = all(p.parity for p in elements)

    levels = 0
    while frontier:
        snapshot = len(elements)
        known_x = xs[:snapshot]
        known_z = zs[:snapshot]
        discovered: list[int] = []
        for index in frontier:
            parent = elements[index]
            fx = np.uint64(parent.x_mask)
            fz = np.uint64(parent.z_mask)
            anticommuting = (np.bitwise_count((fx & known_z) ^ (fz & known_x)) & 1).astype(bool)
            partners = np.flatnonzero(anticommuting)
            if partners.size == 0:
                continue
            product_x = fx ^ known_x[partners]
            product_z = fz ^ known_z[partners]
            keys = (product_x | (product_z << shift)).astype(np.int64)
            fresh = ~seen[keys]
            if not fresh.any():
                continue
            keys = keys[fresh]
            partners = partners[fresh]
            product_x = product_x[fresh]
            product_z = product_z[fresh]
            _, first = np.unique(keys, return_index=True)
            for position in np.sort(first):
                child = PhasedPauli(n, int(product_x[position]), int(product_z[position]))
                discovered.append(add(child))
                provenance[child] = (parent, elements[int(partners[position])])
        frontier = sorted(discovered, key=lambda i: elements[i].sort_key)
        levels += 1
        logger.debug("closure level %d: %d new, %d total", levels, len(discovered), len(elements))

    if all_generators_odd and elements:
        weights = np.bitwise_count(xs[: len(elements)] | zs[: len(elements)])
        if not np.all(weights & 1):
            raise InvariantViolationError("odd generators produced an even-weight string")

    result = ClosureResult(
        num_qubits=n,
        elements=tuple(elements),
        provenance=MappingProxyType(provenance),
        generators=frozenset(unique),
        sources=MappingProxyType(dict(sources or {})),
        levels=levels,
    )
    logger.info("closure on %d qubits: dimension %d", n, result.dimension)
    return result


def close(h: Hamiltonian, include_local_unitaries: bool = True) -> ClosureResult:
    """Closure of the term strings, plus every weight-1 string when local
    unitaries are free."""
    generators = [term.pauli for term in h.terms]
    if include_local_unitaries:
        generators.extend(local_paulis(h.num_qubits))
    sources = {term.pauli: term for term in h.terms}
    return close_generators(h.num_qubits, generators, sources=sources)


def all_strings(num_qubits: int) -> frozenset[PhasedPauli]:
    """Every non-identity string, by enumeration."""
    return frozenset(
        PhasedPauli.from_label("".join(letters))
        for letters in product("IXYZ", repeat=num_qubits)
        if set(letters) != {"I"}
    )


def odd_weight_strings(num_qubits: int) -> frozenset[PhasedPauli]:
    return frozenset(p for p in all_strings(num_qubits) if p.parity)


def extract_derivation(
    closure: ClosureResult,
    target: PhasedPauli | str,
    *,
    leaves: Mapping[PhasedPauli, DerivationNode] | None = None,
) -> DerivationNode:
    """Commutator tree reproducing ``target`` up to a nonzero real scale.

    ``leaves`` overrides how generator strings are realised; otherwise a
    generator becomes a :class:`Given` leaf when it is a Hamiltonian term and
    a :class:`LocalPauli` leaf when it has weight 1.
    """
    if isinstance(target, str):
        try:
            pauli = PhasedPauli.from_label(target)
        except ValueError as exc:
            raise ClosureError(f"bad target: {exc}") from exc
    else:
        pauli = target.unsigned()
    if pauli not in closure:
        raise ClosureError(f"{pauli.label} is not in the closure")
    overrides = leaves or {}
    built: dict[PhasedPauli, DerivationNode] = {}

    # Provenance parents are always discovered earlier, so building in
    # discovery order needs no recursion.
    needed = _ancestry(closure, pauli, overrides)
    for element in closure.elements:
        if element not in needed:
            continue
        if element in overrides:
            node = overrides[element]
        elif element in closure.generators:
            node = _generator_leaf(closure, element)
        else:
            left, right = closure.provenance[element]
            node = Commutator(built[left], built[right])
        built[element] = node
    tree = built[pauli]
    if effective_term(tree).pauli != pauli:
        raise InvariantViolationError(f"derivation of {pauli.label} replays to another string")
    return tree


def _ancestry(
    closure: ClosureResult, pauli: PhasedPauli, leaves: Mapping[PhasedPauli, DerivationNode]
) -> set[PhasedPauli]:
    needed: set[PhasedPauli] = set()
    stack = [pauli]
    while stack:
        current = stack.pop()
        if current in needed:
            continue
        needed.add(current)
        if current in leaves or current in closure.generators:
            continue
        stack.extend(closure.provenance[current])
    return needed


def _generator_leaf(closure: ClosureResult, pauli: PhasedPauli) -> DerivationNode:
    term = closure.sources.get(pauli)
    if term is not None:
        return Given(term)
    if pauli.weight == 1:
        return LocalPauli(pauli)
    raise ClosureError(f"generator {pauli.label} has no source term")
