from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from pauli_universality.hamiltonian import Hamiltonian, parse_hamiltonian

# Fixed so a failing random sweep can be replayed.
_TEST_SEED = 20240601


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(_TEST_SEED)


@pytest.fixture
def xxi_ixx() -> Hamiltonian:
    return parse_hamiltonian("1.0 XXI\n1.0 IXX\n")


@pytest.fixture
def write_hamiltonian(tmp_path: Path):
    """Write Hamiltonian text to ``tmp_path/name`` and return the path."""

    def write(name: str, text: str) -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return write
