from __future__ import annotations

import copy
import json

import pytest

from pauli_universality.derivation import (
    Combine,
    Commutator,
    Conjugate,
    Given,
    Isolate,
    LocalPauli,
    Rescale,
    conjugate_to,
    count_commutators,
    depth,
    effective_term,
    iter_nodes,
    lower_local_commutators,
    positive_root,
    replay,
    tree_from_json,
    tree_to_json,
)
from pauli_universality.errors import DerivationError, QubitCountMismatchError, SynthesisError
from pauli_universality.hamiltonian import Hamiltonian
from pauli_universality.isolation import deterministic_isolation_schedule
from pauli_universality.pauli import CliffordLayer, PhasedPauli, Term


def _given(coefficient: float, label: str) -> Given:
    return Given(Term.of(coefficient, label))


def _local(label: str) -> LocalPauli:
    return LocalPauli(PhasedPauli.from_label(label))


def _sample_tree(xxi_ixx: Hamiltonian) -> Combine:
    isolate = Isolate(xxi_ixx, deterministic_isolation_schedule(xxi_ixx, "XXI"))
    commutator = Commutator(_given(1.0, "XXI"), _given(0.5, "IYX"))
    rotated = Conjugate(_given(2.0, "IXX"), CliffordLayer.from_text(["+X+Z", "+Z+X", "+X+Z"]))
    return Combine((Rescale(isolate, 1 / 32), commutator, rotated), (1.0, 2.0, -1.0))


def test_commutator_node_caches_its_hamiltonian() -> None:
    node = Commutator(_given(1.0, "XX"), _given(1.0, "YX"))
    assert node.hamiltonian == Hamiltonian.from_terms(2, [(-2.0, "ZI")])
    assert effective_term(node) == Term.of(-2.0, "ZI")


def test_isolate_node_keeps_only_the_target(xxi_ixx: Hamiltonian) -> None:
    node = Isolate(xxi_ixx, deterministic_isolation_schedule(xxi_ixx, 0))
    assert effective_term(node) == Term.of(32.0, "IZZ")


def test_combine_and_rescale() -> None:
    combined = Combine((_given(1.0, "XX"), _given(1.0, "ZI")), (2.0, -1.0))
    assert combined.hamiltonian == Hamiltonian.from_terms(2, [(2.0, "XX"), (-1.0, "ZI")])
    assert Rescale(combined, 0.5).hamiltonian.coefficient("XX") == 1.0


def test_effective_term_needs_a_single_term() -> None:
    combined = Combine((_given(1.0, "XX"), _given(1.0, "ZI")), (1.0, 1.0))
    with pytest.raises(DerivationError, match="single-term"):
        effective_term(combined)


@pytest.mark.parametrize("factor", [0.0, -1.0, float("inf"), float("nan")])
def test_rescale_needs_a_positive_factor(factor: float) -> None:
    with pytest.raises(DerivationError):
        Rescale(_given(1.0, "XX"), factor)


@pytest.mark.parametrize("label", ["XX", "-X", "iZ"])
def test_local_pauli_must_be_an_unsigned_weight_one_string(label: str) -> None:
    with pytest.raises(DerivationError):
        _local(label)


def test_combine_needs_matching_weights() -> None:
    with pytest.raises(DerivationError):
        Combine((), ())
    with pytest.raises(DerivationError):
        Combine((_given(1.0, "XX"),), (1.0, 2.0))


def test_conjugate_checks_layer_size() -> None:
    with pytest.raises(QubitCountMismatchError):
        Conjugate(_given(1.0, "XX"), CliffordLayer.from_pauli("Z"))


def test_iter_nodes_is_post_order_and_visits_shared_nodes_once() -> None:
    leaf = _given(1.0, "XX")
    root = Combine((leaf, leaf), (1.0, 1.0))
    assert list(iter_nodes(root)) == [leaf, root]
    assert root.hamiltonian.coefficient("XX") == 2.0
    assert depth(root) == 2


def test_depth_and_commutator_count(xxi_ixx: Hamiltonian) -> None:
    tree = _sample_tree(xxi_ixx)
    assert depth(tree) == 3
    assert count_commutators(tree) == 1
    kinds = [node.kind for node in iter_nodes(tree)]
    assert kinds[-1] == "combine"
    assert kinds.count("given") == 3


def test_replay_accepts_a_built_tree(xxi_ixx: Hamiltonian) -> None:
    tree = _sample_tree(xxi_ixx)
    assert replay(tree) == tree.hamiltonian


def test_replay_detects_a_corrupted_cache() -> None:
    child = _given(1.0, "XX")
    root = Rescale(child, 3.0)
    object.__setattr__(root, "hamiltonian", Hamiltonian.from_terms(2, [(2.0, "XX")]))
    with pytest.raises(DerivationError, match="rescale"):
        replay(root)


def test_lowering_replaces_local_commutators() -> None:
    tree = Commutator(_given(0.5, "XXX"), _local("YII"))
    lowered = lower_local_commutators(tree)
    assert count_commutators(lowered) == 0
    assert isinstance(lowered, Rescale)
    assert isinstance(lowered.child, Conjugate)
    assert lowered.hamiltonian.is_close(tree.hamiltonian)
    assert effective_term(lowered) == Term.of(-1.0, "ZXX")


def test_lowering_handles_a_local_left_operand() -> None:
    tree = Commutator(_local("IIZ"), _given(1.0, "XYX"))
    lowered = lower_local_commutators(tree)
    assert count_commutators(lowered) == 0
    assert lowered.hamiltonian.is_close(tree.hamiltonian)


def test_lowering_keeps_commutators_between_given_terms() -> None:
    tree = Commutator(_given(1.0, "XXI"), _given(1.0, "IYX"))
    assert lower_local_commutators(tree) is tree


def test_positive_root_flips_a_negative_term() -> None:
    negative = _given(-1.5, "XZ")
    flipped = positive_root(negative, avoid=(0,))
    assert isinstance(flipped, Conjugate)
    assert effective_term(flipped) == Term.of(1.5, "XZ")
    # Only qubit 1 may carry the flip.
    assert flipped.layer.cliffords[0].pauli_letter == "I"
    positive = _given(1.0, "XZ")
    assert positive_root(positive) is positive


def test_positive_root_needs_a_free_support_qubit() -> None:
    with pytest.raises(SynthesisError, match="cannot flip"):
        positive_root(_given(-1.0, "XZ"), avoid=(0, 1))
    assert positive_root(_given(1.0, "XZ"), avoid=(0, 1)).hamiltonian.coefficient("XZ") == 1.0


def test_conjugate_to_rotates_letters_and_keeps_the_coefficient() -> None:
    node = conjugate_to(_given(0.75, "XYI"), {0: "Z", 1: "Y"})
    assert effective_term(node) == Term.of(0.75, "ZYI")
    unchanged = _given(1.0, "XX")
    assert conjugate_to(unchanged, {0: "X"}) is unchanged
    with pytest.raises(DerivationError):
        conjugate_to(unchanged, {0: "I"})


def test_json_round_trip(xxi_ixx: Hamiltonian) -> None:
    tree = _sample_tree(xxi_ixx)
    document = json.loads(json.dumps(tree_to_json(tree, hamiltonian="two_term.ham")))
    assert document["format"] == "pauli-universality/derivation"
    assert document["version"] == 1
    assert document["num_qubits"] == 3
    assert document["hamiltonian"] == "two_term.ham"
    restored = tree_from_json(document)
    assert restored.hamiltonian.is_close(tree.hamiltonian)
    assert [n.kind for n in iter_nodes(restored)] == [n.kind for n in iter_nodes(tree)]
    assert tree_to_json(restored, hamiltonian="two_term.ham") == document


def test_json_rejects_a_tampered_hamiltonian() -> None:
    document = tree_to_json(Rescale(_given(1.0, "XX"), 2.0))
    tampered = copy.deepcopy(document)
    tampered["root"]["hamiltonian"]["terms"][0][0] = 3.0
    with pytest.raises(DerivationError, match="file says"):
        tree_from_json(tampered)


@pytest.mark.parametrize(
    ("change", "fragment"),
    [
        ({"format": "something-else"}, "not a derivation document"),
        ({"version": 2}, "unsupported derivation version"),
        ({"root": {"type": "teleport"}}, "unknown node type"),
        ({"root": {"type": "rescale", "factor": 2.0}}, "malformed derivation"),
    ],
)
def test_json_rejects_bad_documents(change: dict[str, object], fragment: str) -> None:
    document = {**tree_to_json(_given(1.0, "XX")), **change}
    with pytest.raises(DerivationError, match=fragment):
        tree_from_json(document)
