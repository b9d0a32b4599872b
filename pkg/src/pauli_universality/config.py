"""Run configuration shared by the CLI subcommands.

Explicit arguments win, then the environment, then a default.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from pauli_universality.errors import ConfigError

PAULI_UNIVERSALITY_THREADS_ENV = "PAULI_UNIVERSALITY_THREADS"

# Seeds are kept to 63 bits so they survive JSON and CSV round trips.
_SEED_MASK = (1 << 63) - 1


def resolve_threads(override: int | None = None) -> int:
    if override is not None:
        if override < 1:
            raise ConfigError(f"--threads must be at least 1, got {override}")
        return override
    configured = os.environ.get(PAULI_UNIVERSALITY_THREADS_ENV)
    if configured:
        try:
            threads = int(configured)
        except ValueError:
            raise ConfigError(
                f"{PAULI_UNIVERSALITY_THREADS_ENV}={configured!r} is not an integer"
            ) from None
        if threads < 1:
            raise ConfigError(f"{PAULI_UNIVERSALITY_THREADS_ENV} must be at least 1")
        return threads
    return max(1, os.cpu_count() or 1)


def resolve_seed(override: int | None = None) -> int:
    """The given seed, or fresh OS entropy folded to 63 bits."""
    if override is not None:
        return override
    return int(np.random.SeedSequence().entropy) & _SEED_MASK


@dataclass(frozen=True, slots=True)
class RunConfig:
    """Everything one CLI invocation depends on.

    Randomized commands always carry a concrete ``seed`` here, either the
    one given or a freshly drawn one, so their reports can be replayed.
    """

    command: str
    inputs: tuple[Path, ...] = ()
    output: Path | None = None
    seed: int | None = None
    threads: int = 1
    verbosity: int = 0
    json_only: bool = False
    m: tuple[int, ...] = ()
    trials: int | None = None
    total_time: float | None = None
    step: float | None = None
    commutator_step: float | None = None
