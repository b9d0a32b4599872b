"""Compile derivation trees into programs of layers and evolutions, run them
densely, and measure how far they are from the ideal evolution.

Durations are signed. Conjugation sandwiches the child between the inverse
layer and the layer; combinations use first-order product slices of width
``step``; a commutator of duration tau runs ``ceil(tau / delta**2)`` group
commutator cycles; rescaling stretches time; isolation replays its
``2**m`` conjugated segments every slice.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass

import numpy as np

from pauli_universality.derivation import (
    Combine,
    Commutator,
    Conjugate,
    DerivationNode,
    Given,
    Isolate,
    LocalPauli,
    Rescale,
)
from pauli_universality.errors import NumericError
from pauli_universality.hamiltonian import Hamiltonian
from pauli_universality.numeric._dense import (
    evolve,
    layer_unitary,
    phase_aligned_distance,
    to_matrix,
)
from pauli_universality.pauli import CliffordLayer, PhasedPauli, Term

logger = logging.getLogger(__name__)

MAX_COMPILE_QUBITS = 6
# Guard against ceil(0.2 / 0.01) == 21 from float noise.
_RATIO_SLACK = 1e-9


@dataclass(frozen=True, slots=True)
class TrotterParams:
    total_time: float
    step: float
    commutator_step: float | None = None

    def __post_init__(self) -> None:
        if not self.step > 0:
            raise NumericError(f"step must be positive, got {self.step}")
        if self.commutator_step is not None and not self.commutator_step > 0:
            raise NumericError(f"commutator step must be positive, got {self.commutator_step}")
        if self.step > abs(self.total_time) * (1 + _RATIO_SLACK):
            raise NumericError(
                f"step {self.step} is longer than the total time {self.total_time}"
            )

    @property
    def delta(self) -> float:
        return self.step if self.commutator_step is None else self.commutator_step


@dataclass(frozen=True, slots=True)
class LayerStep:
    layer: CliffordLayer


@dataclass(frozen=True, slots=True)
class EvolutionStep:
    hamiltonian: Hamiltonian
    duration: float


Step = LayerStep | EvolutionStep


def _repetitions(ratio: float) -> int:
    return max(1, math.ceil(ratio * (1 - _RATIO_SLACK)))


def compile_derivation(tree: DerivationNode, params: TrotterParams) -> list[Step]:
    """Time-ordered program for ``exp(-i H t)`` with H the tree's effective
    Hamiltonian."""
    steps: list[Step] = []
    _emit(tree, params.total_time, params, steps)
    logger.debug("compiled %s tree into %d steps", tree.kind, len(steps))
    return steps


def _emit(node: DerivationNode, duration: float, params: TrotterParams, out: list[Step]) -> None:
    if duration == 0:
        return
    if isinstance(node, (Given, LocalPauli)):
        out.append(EvolutionStep(node.hamiltonian, duration))
    elif isinstance(node, Conjugate):
        out.append(LayerStep(node.layer.inverse()))
        _emit(node.child, duration, params, out)
        out.append(LayerStep(node.layer))
    elif isinstance(node, Rescale):
        _emit(node.child, duration * node.factor, params, out)
    elif isinstance(node, Combine):
        slices = _repetitions(abs(duration) / params.step)
        width = duration / slices
        for _ in range(slices):
            for part, weight in zip(node.parts, node.weights, strict=True):
                _emit(part, weight * width, params, out)
    elif isinstance(node, Commutator):
        left, right = node.left, node.right
        if duration < 0:
            left, right = right, left
            duration = -duration
        cycles = _repetitions(duration / params.delta**2)
        delta = math.sqrt(duration / cycles)
        for _ in range(cycles):
            _emit(right, delta, params, out)
            _emit(left, -delta, params, out)
            _emit(right, -delta, params, out)
            _emit(left, delta, params, out)
    elif isinstance(node, Isolate):
        slices = _repetitions(abs(duration) / params.step)
        width = duration / slices
        segments = list(node.schedule.segment_conjugations())
        for _ in range(slices):
            for layer in segments:
                out.append(LayerStep(layer.inverse()))
                out.append(EvolutionStep(node.source, width))
                out.append(LayerStep(layer))
    else:
        raise NumericError(f"cannot evolve a {type(node).__name__} node")


def run_steps(steps: Sequence[Step], num_qubits: int) -> np.ndarray:
    """Product of the program's unitaries, later steps on the left."""
    if num_qubits > MAX_COMPILE_QUBITS:
        raise NumericError(
            f"compiled programs are limited to {MAX_COMPILE_QUBITS} qubits, got {num_qubits}"
        )
    unitary = np.eye(2**num_qubits, dtype=complex)
    for matrix in _step_matrices(steps):
        unitary = matrix @ unitary
    return unitary


def _step_matrices(steps: Sequence[Step]) -> Iterator[np.ndarray]:
    layers: dict[CliffordLayer, np.ndarray] = {}
    generators: dict[Hamiltonian, np.ndarray] = {}
    evolutions: dict[tuple[Hamiltonian, float], np.ndarray] = {}
    for step in steps:
        if isinstance(step, LayerStep):
            if step.layer not in layers:
                layers[step.layer] = layer_unitary(step.layer)
            yield layers[step.layer]
            continue
        key = (step.hamiltonian, step.duration)
        if key not in evolutions:
            if step.hamiltonian not in generators:
                generators[step.hamiltonian] = to_matrix(step.hamiltonian)
            evolutions[key] = evolve(generators[step.hamiltonian], step.duration)
        yield evolutions[key]


def verify(tree: DerivationNode, params: TrotterParams) -> float:
    """Phase-aligned operator-norm distance between the compiled program and
    the exact evolution under the tree's effective Hamiltonian."""
    if tree.num_qubits > MAX_COMPILE_QUBITS:
        raise NumericError(
            f"compiled programs are limited to {MAX_COMPILE_QUBITS} qubits, got {tree.num_qubits}"
        )
    compiled = run_steps(compile_derivation(tree, params), tree.num_qubits)
    exact = evolve(to_matrix(tree.hamiltonian), params.total_time)
    return phase_aligned_distance(compiled, exact)


@dataclass(frozen=True, slots=True)
class LadderRow:
    step: float
    commutator_step: float
    error: float


def trotter_ladder(
    tree: DerivationNode,
    total_time: float,
    steps: Sequence[float],
    commutator_steps: Sequence[float] | None = None,
) -> list[LadderRow]:
    """:func:`verify` at each rung; the commutator step follows ``step``
    unless given."""
    deltas = list(commutator_steps) if commutator_steps is not None else list(steps)
    if len(deltas) != len(steps):
        raise NumericError("one commutator step per ladder rung")
    rows = []
    for step, delta in zip(steps, deltas, strict=True):
        error = verify(tree, TrotterParams(total_time, step, delta))
        logger.info("ladder step=%g delta=%g error=%.3e", step, delta, error)
        rows.append(LadderRow(step, delta, error))
    return rows


def local_error_ladder(tree: DerivationNode, steps: Sequence[float]) -> list[LadderRow]:
    """One-slice errors: ``t = step`` in general, ``t = step**2`` (a single
    cycle) when the root is a commutator."""
    rows = []
    for step in steps:
        total_time = step**2 if isinstance(tree, Commutator) else step
        params = TrotterParams(total_time, total_time, step)
        rows.append(LadderRow(step, step, verify(tree, params)))
    return rows


def fit_order(rows: Sequence[LadderRow]) -> float:
    """Slope of log(error) against log(step)."""
    points = [(row.step, row.error) for row in rows if row.error > 0]
    if len(points) < 2:
        raise NumericError("need at least two nonzero errors to fit an order")
    steps, errors = zip(*points, strict=True)
    slope, _ = np.polyfit(np.log(steps), np.log(errors), 1)
    return float(slope)


@dataclass(frozen=True, slots=True)
class EncodedReport:
    fidelity: float
    min_ancilla_population: float
    final_ancilla_population: float
    logical_hamiltonian: Hamiltonian


def _drop_qubit(pauli: PhasedPauli, qubit: int) -> PhasedPauli:
    label = pauli.label
    return PhasedPauli.from_label(label[:qubit] + label[qubit + 1 :])


def logical_hamiltonian(h: Hamiltonian, ancilla: int) -> Hamiltonian:
    """Action on the logical qubits with the ancilla in |0>: Z and I on the
    ancilla both act as +1."""
    terms = []
    for term in h.terms:
        letter = term.pauli.letter(ancilla)
        if letter not in "IZ":
            raise NumericError(f"{term.label} moves the ancilla out of |0>")
        reduced = _drop_qubit(term.pauli, ancilla)
        if not reduced.is_identity:
            terms.append(Term(term.coefficient, reduced))
    return Hamiltonian.from_terms(h.num_qubits - 1, terms)


def _ancilla_isometry(num_qubits: int, ancilla: int) -> np.ndarray:
    """Columns embed logical basis states with the ancilla bit set to 0."""
    logical_dim = 2 ** (num_qubits - 1)
    isometry = np.zeros((2**num_qubits, logical_dim), dtype=complex)
    ancilla_bit = num_qubits - 1 - ancilla
    for column in range(logical_dim):
        high = column >> ancilla_bit
        low = column & ((1 << ancilla_bit) - 1)
        isometry[(high << (ancilla_bit + 1)) | low, column] = 1.0
    return isometry


def encoded_report(tree: DerivationNode, ancilla: int, params: TrotterParams) -> EncodedReport:
    """Run an encoded program from the ancilla in |0> and compare the
    logical block with the ideal logical evolution.

    Fidelity is the state-averaged gate fidelity of the logical block K
    against V, ``(tr(K^dagger K) + |tr(V^dagger K)|**2) / (d (d + 1))``.
    """
    n = tree.num_qubits
    if n > MAX_COMPILE_QUBITS:
        raise NumericError(f"compiled programs are limited to {MAX_COMPILE_QUBITS} qubits")
    embed = _ancilla_isometry(n, ancilla)
    state = embed.copy()
    minimum = 1.0
    for matrix in _step_matrices(compile_derivation(tree, params)):
        state = matrix @ state
        inside = embed.conj().T @ state
        # Worst logical input: smallest singular value of the kept block.
        population = float(np.linalg.svd(inside, compute_uv=False).min() ** 2)
        minimum = min(minimum, population)
    block = embed.conj().T @ state
    final = float(np.linalg.svd(block, compute_uv=False).min() ** 2)
    logical = logical_hamiltonian(tree.hamiltonian, ancilla)
    ideal = evolve(to_matrix(logical), params.total_time)
    dim = ideal.shape[0]
    fidelity = (
        np.trace(block.conj().T @ block).real + abs(np.trace(ideal.conj().T @ block)) ** 2
    ) / (dim * (dim + 1))
    return EncodedReport(float(fidelity), minimum, final, logical)
