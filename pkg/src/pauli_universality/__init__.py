from __future__ import annotations

__version__ = "1.0.0"

from pauli_universality.derivation import (  # noqa: E402
    Combine,
    Commutator,
    Conjugate,
    DerivationNode,
    Given,
    Isolate,
    LocalPauli,
    Rescale,
    replay,
    tree_from_json,
    tree_to_json,
)
from pauli_universality.errors import (  # noqa: E402
    ClosureError,
    ConfigError,
    DerivationError,
    HamiltonianParseError,
    InvariantViolationError,
    IsolationError,
    NumericError,
    PauliUniversalityError,
    QubitCountMismatchError,
    SynthesisError,
)
from pauli_universality.families import (  # noqa: E402
    chain_family,
    complete_family,
    ghz_prime,
    ghz_projector,
)
from pauli_universality.hamiltonian import (  # noqa: E402
    Classification,
    ClassificationKind,
    Hamiltonian,
    classify,
    load_hamiltonian,
    parse_hamiltonian,
)
from pauli_universality.isolation import (  # noqa: E402
    RandomizedIsolationParams,
    Schedule,
    apply_schedule_symbolic,
    deterministic_isolation_schedule,
    isolation_sweep,
    randomized_isolation,
)
from pauli_universality.lie_closure import (  # noqa: E402
    ClosureResult,
    close,
    extract_derivation,
)
from pauli_universality.pauli import (  # noqa: E402
    CliffordLayer,
    PhasedPauli,
    SingleQubitClifford,
    Term,
    commutator,
    commutes,
)
from pauli_universality.synthesis import (  # noqa: E402
    EncodedDerivation,
    IsolatingSet,
    derive_encoded,
    derive_from_closure,
    derive_odd_target,
    find_isolating_set,
    synthesize,
)

__all__ = [
    "Classification",
    "ClassificationKind",
    "CliffordLayer",
    "ClosureError",
    "ClosureResult",
    "Combine",
    "Commutator",
    "ConfigError",
    "Conjugate",
    "DerivationError",
    "DerivationNode",
    "EncodedDerivation",
    "Given",
    "Hamiltonian",
    "HamiltonianParseError",
    "InvariantViolationError",
    "Isolate",
    "IsolatingSet",
    "IsolationError",
    "LocalPauli",
    "NumericError",
    "PauliUniversalityError",
    "PhasedPauli",
    "QubitCountMismatchError",
    "RandomizedIsolationParams",
    "Rescale",
    "Schedule",
    "SingleQubitClifford",
    "SynthesisError",
    "Term",
    "apply_schedule_symbolic",
    "chain_family",
    "classify",
    "close",
    "commutator",
    "commutes",
    "complete_family",
    "derive_encoded",
    "derive_from_closure",
    "derive_odd_target",
    "deterministic_isolation_schedule",
    "extract_derivation",
    "find_isolating_set",
    "ghz_prime",
    "ghz_projector",
    "isolation_sweep",
    "load_hamiltonian",
    "parse_hamiltonian",
    "randomized_isolation",
    "replay",
    "synthesize",
    "tree_from_json",
    "tree_to_json",
]
