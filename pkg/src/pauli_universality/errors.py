"""Exception hierarchy.

Every error raised on purpose by this package derives from
``PauliUniversalityError`` and from the builtin that best describes it, so
callers can catch either.
"""

from __future__ import annotations


class PauliUniversalityError(Exception):
    pass


class QubitCountMismatchError(PauliUniversalityError, ValueError):
    def __init__(self, expected: int, actual: int) -> None:
        super().__init__(f"qubit count mismatch: expected {expected}, got {actual}")
        self.expected = expected
        self.actual = actual


class HamiltonianParseError(PauliUniversalityError, ValueError):
    """Malformed Hamiltonian text.

    ``line`` and ``column`` are 1-based; both are ``None`` when the problem
    belongs to the document as a whole (for example, no terms left).
    """

    def __init__(self, reason: str, *, line: int | None = None, column: int | None = None) -> None:
        self.reason = reason
        self.line = line
        self.column = column
        if line is None:
            super().__init__(reason)
        else:
            super().__init__(f"line {line}, column {column or 1}: {reason}")


class IsolationError(PauliUniversalityError, ValueError):
    pass


class ClosureError(PauliUniversalityError, ValueError):
    pass


class InvariantViolationError(PauliUniversalityError, RuntimeError):
    """An internal invariant failed. Always a bug, never bad input."""


class SynthesisError(PauliUniversalityError, ValueError):
    pass


class DerivationError(PauliUniversalityError, ValueError):
    pass


class NumericError(PauliUniversalityError, ValueError):
    pass


class ConfigError(PauliUniversalityError, ValueError):
    pass
