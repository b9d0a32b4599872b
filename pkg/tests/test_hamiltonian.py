from __future__ import annotations

import logging
from itertools import permutations

import numpy as np
import pytest

from pauli_universality.errors import HamiltonianParseError, InvariantViolationError
from pauli_universality.hamiltonian import (
    AlgebraKind,
    ClassificationKind,
    Hamiltonian,
    algebra_dimension,
    classify,
    conjugate_hamiltonian,
    connected_components,
    enumerate_coupling_set,
    format_hamiltonian,
    hamiltonian_commutator,
    is_entangling,
    load_hamiltonian,
    parse_hamiltonian,
)
from pauli_universality.pauli import (
    CliffordLayer,
    PhasedPauli,
    SingleQubitClifford,
    Term,
    all_single_qubit_cliffords,
)
from tests.hamiltonian_factory import random_odd_hamiltonian, random_universal_hamiltonian


def test_from_terms_merges_prunes_and_sorts() -> None:
    h = Hamiltonian.from_terms(
        2, [(1.0, "ZI"), (0.5, "XX"), (0.25, "ZI"), (1e-14, "YY"), (-0.5, "XX")]
    )
    assert h.labels == ("ZI",)
    assert h.coefficient("ZI") == 1.25
    assert h.coefficient("YY") == 0.0


def test_empty_hamiltonian_is_a_valid_value() -> None:
    h = Hamiltonian.from_terms(2, [(1.0, "XX"), (-1.0, "XX")])
    assert h.is_empty
    assert str(h) == "0"


def test_scale_add_and_index() -> None:
    h = Hamiltonian.from_terms(2, [(1.0, "XX"), (2.0, "ZI")])
    assert h.scale(2.0).coefficient("ZI") == 4.0
    assert h.add(Hamiltonian.from_terms(2, [(-1.0, "XX")])).labels == ("ZI",)
    assert h.index_of("ZI") == 1
    assert h.index_of("YY") is None
    assert len(h) == 2


def test_hamiltonian_commutator_is_bilinear() -> None:
    a = Hamiltonian.from_terms(2, [(1.0, "XX"), (1.0, "ZI")])
    b = Hamiltonian.from_terms(2, [(1.0, "YX")])
    # i[XX, YX] = -2 ZI, i[ZI, YX] = 2 XX.
    assert hamiltonian_commutator(a, b) == Hamiltonian.from_terms(2, [(-2.0, "ZI"), (2.0, "XX")])


def test_conjugate_hamiltonian_tracks_signs() -> None:
    h = Hamiltonian.from_terms(2, [(1.0, "XY"), (1.0, "ZI")])
    layer = CliffordLayer.single(2, 1, SingleQubitClifford("+Z", "+X"))
    assert conjugate_hamiltonian(h, layer) == Hamiltonian.from_terms(
        2, [(-1.0, "XY"), (1.0, "ZI")]
    )


def test_conjugate_hamiltonian_rejects_non_hermitian_images() -> None:
    # A string carrying a phase i has no Hermitian image.
    h = Hamiltonian(1, (Term(1.0, PhasedPauli.from_label("X")),))
    object.__setattr__(h.terms[0], "pauli", PhasedPauli.from_label("iX"))
    with pytest.raises(InvariantViolationError):
        conjugate_hamiltonian(h, CliffordLayer.identity(1))


def test_parity_census() -> None:
    h = parse_hamiltonian("1 XXI\n1 IXX\n1 ZZZ\n")
    assert h.parity_census() == {"odd_terms": 1, "even_terms": 2, "weights": {"2": 2, "3": 1}}


# ── parser ─────────────────────────────────────────────────────────────


def test_parse_two_term_example() -> None:
    h = parse_hamiltonian("1.0 XXI\n1.0 IXX")
    assert h.num_qubits == 3
    assert h.labels == ("IXX", "XXI")


def test_parse_header_comments_and_blank_lines() -> None:
    text = "# a comment\n\nqubits: 3   # trailing\n  0.5  ZZI\n-2e-1 IYY # another\n"
    h = parse_hamiltonian(text)
    assert h.num_qubits == 3
    assert h.coefficient("ZZI") == 0.5
    assert h.coefficient("IYY") == -0.2


def test_parse_ghz_projector_drops_identity(caplog: pytest.LogCaptureFixture) -> None:
    text = "1 III\n1 ZZI\n1 ZIZ\n1 IZZ\n-1 XYY\n-1 YXY\n-1 YYX\n"
    with caplog.at_level(logging.WARNING, logger="pauli_universality"):
        h = parse_hamiltonian(text)
    assert len(h) == 6
    assert "identity" in caplog.text


def test_parse_rejects_full_cancellation() -> None:
    with pytest.raises(HamiltonianParseError, match="empty"):
        parse_hamiltonian("1.0 XXI\n-1.0 XXI")


@pytest.mark.parametrize(
    ("text", "line", "column", "fragment"),
    [
        ("1.0 XQI\n", 1, 6, "invalid character 'Q'"),
        ("qubits: 3\n1.0 XXI\n  2.0 XX\n", 3, 7, "length 2, expected 3"),
        ("1.0 XXI\nabc IXX\n", 2, 1, "unparsable coefficient"),
        ("1.0 XXI\nnan IXX\n", 2, 1, "unparsable coefficient"),
        ("1.0 XXI\nqubits: 3\n", 2, 1, "header must precede"),
        ("qubits: zero\n1 X\n", 1, 1, "invalid qubit count"),
        ("1.0 XXI extra\n", 1, 1, "expected"),
    ],
)
def test_parse_errors_carry_line_and_column(
    text: str, line: int, column: int, fragment: str
) -> None:
    with pytest.raises(HamiltonianParseError) as info:
        parse_hamiltonian(text)
    assert info.value.line == line
    assert info.value.column == column
    assert fragment in str(info.value)
    assert str(info.value).startswith(f"line {line}, column {column}: ")


def test_parse_rejects_documents_without_terms() -> None:
    with pytest.raises(HamiltonianParseError, match="no terms"):
        parse_hamiltonian("# nothing here\nqubits: 2\n")


def test_format_parse_round_trip(rng: np.random.Generator) -> None:
    for num_qubits in (2, 3, 4):
        h = random_universal_hamiltonian(num_qubits, rng, extra=4)
        assert parse_hamiltonian(format_hamiltonian(h)) == h


def test_load_hamiltonian_reads_utf8(write_hamiltonian) -> None:
    path = write_hamiltonian("h.ham", "qubits: 2\n1 XX\n")
    assert load_hamiltonian(path).labels == ("XX",)


# ── connectivity ───────────────────────────────────────────────────────


def test_two_term_example_is_entangling(xxi_ixx: Hamiltonian) -> None:
    assert is_entangling(xxi_ixx)
    assert connected_components(xxi_ixx) == ((0, 1, 2),)


def test_untouched_qubit_is_its_own_component() -> None:
    h = parse_hamiltonian("qubits: 3\n1 XXI\n")
    assert connected_components(h) == ((0, 1), (2,))
    assert not is_entangling(h)


def test_weight_one_terms_add_no_edges() -> None:
    h = parse_hamiltonian("1 XII\n1 IXI\n1 IIX\n")
    assert connected_components(h) == ((0,), (1,), (2,))


def test_overlapping_triples_are_entangling() -> None:
    assert is_entangling(parse_hamiltonian("1 ZZZII\n1 IIZZZ\n"))


def test_coupling_set_of_a_three_qubit_support() -> None:
    strings = {p.label for p in enumerate_coupling_set((0, 2, 3), 4)}
    assert len(strings) == 27
    assert {"XIXX", "ZIZZ", "YIYX"} <= strings
    assert all(PhasedPauli.from_label(s).support == (0, 2, 3) for s in strings)


def test_coupling_set_of_a_single_qubit() -> None:
    assert [p.label for p in enumerate_coupling_set((1,), 3)] == ["IXI", "IYI", "IZI"]


@pytest.mark.parametrize("size", [1, 2, 3, 4])
def test_coupling_set_sizes(size: int) -> None:
    assert sum(1 for _ in enumerate_coupling_set(tuple(range(size)), 4)) == 3**size


def test_coupling_set_rejects_empty_support() -> None:
    with pytest.raises(ValueError):
        list(enumerate_coupling_set((), 2))


# ── classification ─────────────────────────────────────────────────────


def test_classify_two_term_example(xxi_ixx: Hamiltonian) -> None:
    result = classify(xxi_ixx)
    assert result.kind is ClassificationKind.UNIVERSAL
    assert result.algebra is AlgebraKind.SU
    assert result.dimension == 63


def test_classify_three_body_coupling() -> None:
    result = classify(parse_hamiltonian("1 XXX\n"))
    assert result.kind is ClassificationKind.ODD_ENTANGLING
    assert result.algebra is AlgebraKind.SP
    assert result.dimension == 36
    assert result.summary == "odd_entangling: sp(8), dimension 36"


def test_classify_overlapping_triples() -> None:
    result = classify(parse_hamiltonian("1 ZZZII\n1 IIZZZ\n"))
    assert result.kind is ClassificationKind.ODD_ENTANGLING
    assert result.algebra is AlgebraKind.SP
    assert result.dimension == 528


def test_classify_even_qubit_count_gives_orthogonal_algebra() -> None:
    result = classify(parse_hamiltonian("1 XXXI\n1 IZZZ\n"))
    assert result.algebra is AlgebraKind.SO
    assert result.dimension == 120


def test_classify_disconnected() -> None:
    result = classify(parse_hamiltonian("qubits: 4\n1 XXII\n1 IIZZ\n"))
    assert result.kind is ClassificationKind.NOT_ENTANGLING
    assert result.components == ((0, 1), (2, 3))
    assert result.dimension is None
    assert result.to_dict()["components"] == [[0, 1], [2, 3]]


@pytest.mark.parametrize(("n", "expected"), [(1, 3), (2, 6), (3, 36), (4, 120), (5, 528)])
def test_odd_algebra_dimensions(n: int, expected: int) -> None:
    assert algebra_dimension(n, "odd") == expected


def test_classification_is_invariant_under_relabelling(rng: np.random.Generator) -> None:
    for build in (random_odd_hamiltonian, random_universal_hamiltonian):
        h = build(4, rng)
        expected = classify(h).kind
        for order in permutations(range(4)):
            relabelled = Hamiltonian.from_terms(
                4,
                (
                    (t.coefficient, "".join(t.label[q] for q in order))
                    for t in h.terms
                ),
            )
            assert classify(relabelled).kind is expected


def test_classification_is_invariant_under_local_cliffords(rng: np.random.Generator) -> None:
    cliffords = all_single_qubit_cliffords()
    for build in (random_odd_hamiltonian, random_universal_hamiltonian):
        h = build(4, rng)
        expected = classify(h)
        for _ in range(10):
            layer = CliffordLayer(tuple(cliffords[int(i)] for i in rng.integers(24, size=4)))
            rotated = classify(conjugate_hamiltonian(h, layer))
            assert rotated.kind is expected.kind
            assert rotated.components == expected.components
