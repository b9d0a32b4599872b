from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterator
from itertools import product

from pauli_universality.hamiltonian._model import Hamiltonian, Support
from pauli_universality.pauli import PhasedPauli


class DisjointSet:
    """Union-find over qubit indices with path compression and union by rank."""

    def __init__(self, size: int) -> None:
        self._parent = list(range(size))
        self._rank = [0] * size

    def find(self, item: int) -> int:
        root = item
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[item] != root:
            self._parent[item], item = root, self._parent[item]
        return root

    def union(self, a: int, b: int) -> None:
        root_a = self.find(a)
        root_b = self.find(b)
        if root_a == root_b:
            return
        if self._rank[root_a] < self._rank[root_b]:
            root_a, root_b = root_b, root_a
        self._parent[root_b] = root_a
        if self._rank[root_a] == self._rank[root_b]:
            self._rank[root_a] += 1

    def groups(self) -> tuple[tuple[int, ...], ...]:
        """Sorted tuple of sorted groups."""
        members: dict[int, list[int]] = defaultdict(list)
        for item in range(len(self._parent)):
            members[self.find(item)].append(item)
        return tuple(sorted(tuple(group) for group in members.values()))


def connected_components(h: Hamiltonian) -> tuple[Support, ...]:
    """Qubit partition induced by the term supports.

    Weight-1 terms couple nothing, so they add no edges.
    """
    components = DisjointSet(h.num_qubits)
    for support in h.supports:
        first, *rest = support
        for qubit in rest:
            components.union(first, qubit)
    return components.groups()


def is_entangling(h: Hamiltonian) -> bool:
    return len(connected_components(h)) == 1


def enumerate_coupling_set(support: Support, num_qubits: int) -> Iterator[PhasedPauli]:
    """Every string that acts non-trivially exactly on ``support``; 3**k of them."""
    if not support:
        raise ValueError("support must be nonempty")
    if any(not 0 <= q < num_qubits for q in support):
        raise ValueError(f"support {support} out of range for {num_qubits} qubits")
    qubits = sorted(set(support))
    for letters in product("XYZ", repeat=len(qubits)):
        label = ["I"] * num_qubits
        for qubit, letter in zip(qubits, letters, strict=True):
            label[qubit] = letter
        yield PhasedPauli.from_label("".join(label))
