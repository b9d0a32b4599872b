"""Conjugate-and-add schedules that isolate one term of a Hamiltonian.

A schedule first conjugates by a basis change, then applies Pauli layers
``H <- L H L + H``. Each layer cancels the terms that anticommute with it
and doubles the rest, so ``m`` layers leave ``2**m`` evolution segments.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator, Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Any, NamedTuple

import numpy as np

from pauli_universality.errors import IsolationError, QubitCountMismatchError
from pauli_universality.hamiltonian import Hamiltonian, conjugate_hamiltonian
from pauli_universality.pauli import (
    CliffordLayer,
    PhasedPauli,
    Term,
    clifford_mapping,
    commutes,
)

logger = logging.getLogger(__name__)

# Letters drawn uniformly per qubit; index = (x bit, z bit) pattern below.
_DRAW_X = np.array([0, 1, 1, 0], dtype=np.int64)  # I X Y Z
_DRAW_Z = np.array([0, 0, 1, 1], dtype=np.int64)


@dataclass(frozen=True, slots=True)
class Schedule:
    basis_change: CliffordLayer
    layers: tuple[CliffordLayer, ...] = ()
    # Pure conjugation applied after the doubling layers; repairs the sign.
    sign_fix: CliffordLayer | None = None

    def __post_init__(self) -> None:
        n = self.basis_change.num_qubits
        for layer in (*self.layers, *([self.sign_fix] if self.sign_fix else [])):
            if layer.num_qubits != n:
                raise QubitCountMismatchError(n, layer.num_qubits)
            if not layer.is_pauli:
                raise IsolationError("schedule layers must be Pauli-only")

    @property
    def num_qubits(self) -> int:
        return self.basis_change.num_qubits

    @property
    def scale(self) -> int:
        return 2 ** len(self.layers)

    @property
    def segments(self) -> int:
        return 2 ** len(self.layers)

    def segment_conjugations(self) -> Iterator[CliffordLayer]:
        """The ``2**m`` layers W whose conjugates W h W^dagger sum to the
        result (before any scale division), in subset order."""
        for subset in range(self.segments):
            layer = self.basis_change
            for index, pauli_layer in enumerate(self.layers):
                if (subset >> index) & 1:
                    layer = layer.compose(pauli_layer)
            if self.sign_fix is not None:
                layer = layer.compose(self.sign_fix)
            yield layer


class RandomizedIsolationParams(NamedTuple):
    m: int
    seed: int
    term: int | str = 0


class IsolationOutcome(NamedTuple):
    schedule: Schedule
    result: Hamiltonian
    success: bool
    draws: int


@dataclass(frozen=True, slots=True)
class SweepResult:
    num_qubits: int
    num_terms: int
    m: int
    trials: int
    failures: int
    draws: int
    seed: int

    @property
    def failure_rate(self) -> float:
        return self.failures / self.trials

    @property
    def other_terms(self) -> int:
        return self.num_terms - 1

    @property
    def bound(self) -> float:
        """Union bound on the failure probability: other terms over 2**m."""
        return min(1.0, self.other_terms / 2**self.m)

    @property
    def acceptance_rate(self) -> float:
        return self.trials * self.m / self.draws if self.draws else 0.0


def apply_schedule_symbolic(h: Hamiltonian, schedule: Schedule) -> Hamiltonian:
    if h.num_qubits != schedule.num_qubits:
        raise QubitCountMismatchError(schedule.num_qubits, h.num_qubits)
    current = conjugate_hamiltonian(h, schedule.basis_change)
    for layer in schedule.layers:
        flip = layer.pauli
        assert flip is not None
        current = Hamiltonian.from_terms(
            h.num_qubits,
            (term.scaled(2.0) for term in current.terms if commutes(term.pauli, flip)),
        )
    if schedule.sign_fix is not None:
        current = conjugate_hamiltonian(current, schedule.sign_fix)
    return current


def resolve_term(h: Hamiltonian, term: int | str) -> int:
    """Index of a term given as an index or as its Pauli string."""
    if isinstance(term, str):
        stripped = term.strip()
        if stripped.lstrip("-").isdigit():
            term = int(stripped)
        else:
            try:
                index = h.index_of(stripped)
            except ValueError:
                index = None
            if index is None:
                raise IsolationError(f"no term {stripped!r} in the Hamiltonian")
            return index
    if not 0 <= term < len(h.terms):
        raise IsolationError(f"term index {term} out of range for {len(h.terms)} terms")
    return term


def deterministic_isolation_schedule(
    h: Hamiltonian, term: int | str, *, fix_sign: bool = True
) -> Schedule:
    """Schedule leaving ``2**(2n - k + k(k-1)/2)`` times the all-Z image of the
    chosen weight-k term and nothing else."""
    target = h.terms[resolve_term(h, term)]
    n = h.num_qubits
    support = target.support
    basis_change = CliffordLayer.from_mapping(
        n, ((q, clifford_mapping(target.pauli.letter(q), "Z")) for q in support)
    )
    layers = [CliffordLayer.from_pauli(PhasedPauli.single(n, q, "Z")) for q in range(n)]
    layers.extend(
        CliffordLayer.from_pauli(PhasedPauli.single(n, q, "X"))
        for q in range(n)
        if q not in support
    )
    for p, q in combinations(support, 2):
        pair = PhasedPauli(n, (1 << p) | (1 << q), 0)
        layers.append(CliffordLayer.from_pauli(pair))
    sign_fix = None
    if fix_sign and target.coefficient < 0:
        sign_fix = CliffordLayer.from_pauli(PhasedPauli.single(n, support[0], "X"))
    return Schedule(basis_change, tuple(layers), sign_fix)


def draw_pauli_layer(num_qubits: int, rng: np.random.Generator) -> PhasedPauli:
    """Uniform draw from {I, X, Y, Z}**n."""
    codes = rng.integers(0, 4, size=num_qubits)
    x_mask = sum(1 << int(q) for q in np.flatnonzero(_DRAW_X[codes]))
    z_mask = sum(1 << int(q) for q in np.flatnonzero(_DRAW_Z[codes]))
    return PhasedPauli(num_qubits, x_mask, z_mask)


def _sample_commuting(target: PhasedPauli, rng: np.random.Generator) -> tuple[PhasedPauli, int]:
    draws = 0
    while True:
        draws += 1
        candidate = draw_pauli_layer(target.num_qubits, rng)
        if commutes(candidate, target):
            return candidate, draws


def sample_commuting_layer(target: PhasedPauli, rng: np.random.Generator) -> CliffordLayer:
    """Uniform Pauli layer conditioned, by rejection, on commuting with ``target``."""
    pauli, _ = _sample_commuting(target, rng)
    return CliffordLayer.from_pauli(pauli)


def randomized_isolation(h: Hamiltonian, params: RandomizedIsolationParams) -> IsolationOutcome:
    if params.m < 1:
        raise IsolationError(f"m must be at least 1, got {params.m}")
    target = h.terms[resolve_term(h, params.term)]
    rng = np.random.Generator(np.random.PCG64(params.seed))
    layers = []
    total_draws = 0
    for _ in range(params.m):
        pauli, draws = _sample_commuting(target.pauli, rng)
        layers.append(CliffordLayer.from_pauli(pauli))
        total_draws += draws
    schedule = Schedule(CliffordLayer.identity(h.num_qubits), tuple(layers))
    result = apply_schedule_symbolic(h, schedule)
    expected = (Term(target.coefficient * schedule.scale, target.pauli),)
    return IsolationOutcome(schedule, result, result.terms == expected, total_draws)


def isolation_sweep(
    h: Hamiltonian,
    *,
    term: int | str,
    m: int,
    trials: int,
    seed: int,
    threads: int = 1,
) -> SweepResult:
    """Monte Carlo failure rate of :func:`randomized_isolation`.

    Trial ``t`` uses seed ``seed + t``, so the result does not depend on
    ``threads``.
    """
    if trials < 1:
        raise IsolationError(f"trials must be at least 1, got {trials}")
    index = resolve_term(h, term)

    def run(trial: int) -> IsolationOutcome:
        return randomized_isolation(h, RandomizedIsolationParams(m, seed + trial, index))

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        outcomes = list(pool.map(run, range(trials)))
    result = SweepResult(
        num_qubits=h.num_qubits,
        num_terms=len(h.terms),
        m=m,
        trials=trials,
        failures=sum(1 for outcome in outcomes if not outcome.success),
        draws=sum(outcome.draws for outcome in outcomes),
        seed=seed,
    )
    logger.info(
        "sweep n=%d m=%d: %d/%d failures", h.num_qubits, m, result.failures, result.trials
    )
    return result


def schedule_to_json(schedule: Schedule) -> dict[str, Any]:
    return {
        "basis_change": [c.text for c in schedule.basis_change.cliffords],
        "layers": [layer.text for layer in schedule.layers],
        "sign_fix": schedule.sign_fix.text if schedule.sign_fix else None,
        "scale": schedule.scale,
        "segments": schedule.segments,
    }


def schedule_from_json(data: Mapping[str, Any]) -> Schedule:
    try:
        basis_change = CliffordLayer.from_text(list(data["basis_change"]))
        layers = tuple(CliffordLayer.from_text(str(text)) for text in data["layers"])
        sign_fix_text = data.get("sign_fix")
    except (KeyError, TypeError, ValueError) as exc:
        raise IsolationError(f"malformed schedule: {exc}") from exc
    sign_fix = CliffordLayer.from_text(sign_fix_text) if sign_fix_text else None
    return Schedule(basis_change, layers, sign_fix)
