"""Text form of a Hamiltonian.

Format (UTF-8)::

    # optional comment
    qubits: 3
    1.0  XXI
    -0.5 IXX

The header is optional; without it the first term fixes the qubit count.
"""

from __future__ import annotations

import logging
import math
from pathlib import Path

from pauli_universality.errors import HamiltonianParseError
from pauli_universality.hamiltonian._model import Hamiltonian
from pauli_universality.pauli import PhasedPauli, Term

logger = logging.getLogger(__name__)

_HEADER = "qubits:"
_VALID_LETTERS = frozenset("IXYZ")


def _column_of(raw_line: str, token: str, start: int = 0) -> int:
    return raw_line.index(token, start) + 1


def parse_hamiltonian(text: str) -> Hamiltonian:
    num_qubits: int | None = None
    terms: list[Term] = []
    saw_term = False
    last_line = 0
    for line_number, raw_line in enumerate(text.splitlines(), start=1):
        content = raw_line.split("#", 1)[0]
        if not content.strip():
            continue
        last_line = line_number
        stripped = content.strip()
        if stripped.lower().startswith(_HEADER):
            if saw_term or num_qubits is not None:
                raise HamiltonianParseError(
                    "the qubits header must precede every term",
                    line=line_number,
                    column=_column_of(raw_line, stripped),
                )
            value = stripped[len(_HEADER) :].strip()
            try:
                num_qubits = int(value)
            except ValueError:
                num_qubits = None
            if num_qubits is None or num_qubits < 1:
                raise HamiltonianParseError(
                    f"invalid qubit count {value!r}",
                    line=line_number,
                    column=_column_of(raw_line, stripped),
                )
            continue

        tokens = content.split()
        if len(tokens) != 2:
            raise HamiltonianParseError(
                "expected '<coefficient> <pauli string>'",
                line=line_number,
                column=_column_of(raw_line, tokens[0]),
            )
        coefficient_text, label = tokens
        coefficient_column = _column_of(raw_line, coefficient_text)
        label_column = _column_of(raw_line, label, coefficient_column - 1 + len(coefficient_text))
        try:
            coefficient = float(coefficient_text)
        except ValueError:
            coefficient = math.nan
        if not math.isfinite(coefficient):
            raise HamiltonianParseError(
                f"unparsable coefficient {coefficient_text!r}",
                line=line_number,
                column=coefficient_column,
            )
        for offset, letter in enumerate(label):
            if letter not in _VALID_LETTERS:
                raise HamiltonianParseError(
                    f"invalid character {letter!r} in Pauli string",
                    line=line_number,
                    column=label_column + offset,
                )
        if num_qubits is None:
            num_qubits = len(label)
        elif len(label) != num_qubits:
            raise HamiltonianParseError(
                f"Pauli string has length {len(label)}, expected {num_qubits}",
                line=line_number,
                column=label_column,
            )
        saw_term = True
        pauli = PhasedPauli.from_label(label)
        if pauli.is_identity:
            logger.warning("line %d: dropping identity term (global phase only)", line_number)
            continue
        terms.append(Term(coefficient, pauli))

    if num_qubits is None or not terms:
        raise HamiltonianParseError("no terms", line=last_line or None, column=1)
    hamiltonian = Hamiltonian.from_terms(num_qubits, terms)
    if hamiltonian.is_empty:
        raise HamiltonianParseError("every term cancelled; the Hamiltonian is empty")
    return hamiltonian


def format_hamiltonian(h: Hamiltonian) -> str:
    lines = [f"{_HEADER} {h.num_qubits}"]
    lines.extend(f"{term.coefficient!r} {term.label}" for term in h.terms)
    return "\n".join(lines) + "\n"


def load_hamiltonian(path: Path | str) -> Hamiltonian:
    return parse_hamiltonian(Path(path).read_text(encoding="utf-8"))
