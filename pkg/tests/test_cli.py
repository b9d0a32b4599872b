from __future__ import annotations

import json
from pathlib import Path

import pytest

from pauli_universality.cli import (
    EXIT_ERROR,
    EXIT_NOT_ENTANGLING,
    EXIT_ODD,
    EXIT_OK,
    SWEEP_COLUMNS,
    main,
)

TWO_TERM = "1.0 XXI\n1.0 IXX\n"


def _json_output(capsys: pytest.CaptureFixture[str], argv: list[str]) -> object:
    capsys.readouterr()
    main(argv)
    return json.loads(capsys.readouterr().out)


@pytest.mark.parametrize(
    ("text", "exit_code", "kind", "headline"),
    [
        (TWO_TERM, EXIT_OK, "universal", "universal: su(8), dimension 63"),
        ("1 XXX\n", EXIT_ODD, "odd_entangling", "odd_entangling: sp(8), dimension 36"),
        (
            "qubits: 4\n1 XXII\n1 IIZZ\n",
            EXIT_NOT_ENTANGLING,
            "not_entangling",
            "not entangling: components {0,1}, {2,3}",
        ),
    ],
)
def test_classify_exit_codes(
    write_hamiltonian,
    capsys: pytest.CaptureFixture[str],
    text: str,
    exit_code: int,
    kind: str,
    headline: str,
) -> None:
    path = write_hamiltonian("h.ham", text)
    assert main(["classify", str(path)]) == exit_code
    assert capsys.readouterr().out.splitlines()[0] == f"{path}: {headline}"
    assert main(["classify", str(path), "--json"]) == exit_code
    payload = json.loads(capsys.readouterr().out)
    assert payload["kind"] == kind
    assert payload["file"] == str(path)


def test_classify_reports_parse_errors(
    write_hamiltonian, capsys: pytest.CaptureFixture[str]
) -> None:
    path = write_hamiltonian("bad.ham", "1.0 XQI\n")
    assert main(["classify", str(path)]) == EXIT_ERROR
    err = capsys.readouterr().err
    assert err.startswith("[pauli-universality] ")
    assert str(path) in err
    assert "line 1, column 6" in err


def test_missing_file_is_an_error(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["classify", str(tmp_path / "missing.ham")]) == EXIT_ERROR
    assert "[pauli-universality]" in capsys.readouterr().err


def test_no_command_prints_help(capsys: pytest.CaptureFixture[str]) -> None:
    assert main([]) == EXIT_OK
    assert "usage" in capsys.readouterr().out


def test_output_file_gets_the_json_report(write_hamiltonian, tmp_path: Path) -> None:
    path = write_hamiltonian("h.ham", "1 XXX\n")
    report = tmp_path / "report.json"
    assert main(["classify", str(path), "-o", str(report), "-q"]) == EXIT_ODD
    payload = json.loads(report.read_text(encoding="utf-8"))
    assert payload["dimension"] == 36
    assert payload["census"] == {"odd_terms": 1, "even_terms": 0, "weights": {"3": 1}}


def test_closure_with_a_target(
    write_hamiltonian, capsys: pytest.CaptureFixture[str]
) -> None:
    path = write_hamiltonian("h.ham", TWO_TERM)
    payload = _json_output(capsys, ["closure", str(path), "--target", "XXX", "--json"])
    assert payload["dimension"] == 63
    assert payload["algebra"] == "su"
    assert payload["derivation"]["format"] == "pauli-universality/derivation"


def test_closure_without_local_paulis(
    write_hamiltonian, capsys: pytest.CaptureFixture[str]
) -> None:
    path = write_hamiltonian("h.ham", TWO_TERM)
    payload = _json_output(capsys, ["closure", str(path), "--no-local", "--list", "--json"])
    assert payload["elements"] == ["IXX", "XXI"]
    assert payload["local_unitaries"] is False


def test_deterministic_isolation(
    write_hamiltonian, capsys: pytest.CaptureFixture[str]
) -> None:
    path = write_hamiltonian("h.ham", TWO_TERM)
    payload = _json_output(capsys, ["isolate", str(path), "--json"])
    assert payload["scale"] == 32
    assert payload["layers"] == 5
    assert payload["result"] == [[32.0, "IZZ"]]
    assert payload["success"] is True


def test_randomized_isolation_records_its_seed(
    write_hamiltonian, capsys: pytest.CaptureFixture[str]
) -> None:
    path = write_hamiltonian("h.ham", TWO_TERM)
    argv = ["isolate", str(path), "--method", "rand", "--m", "6", "--term", "XXI", "--json"]
    seeded = _json_output(capsys, [*argv, "--seed", "5"])
    assert seeded["seed"] == 5
    assert seeded == _json_output(capsys, [*argv, "--seed", "5"])
    fresh = _json_output(capsys, argv)
    assert isinstance(fresh["seed"], int)


def test_synthesize_dump_and_verify(
    write_hamiltonian, tmp_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    path = write_hamiltonian("h.ham", TWO_TERM)
    tree = tmp_path / "zzi.json"
    payload = _json_output(
        capsys, ["synthesize", str(path), "--target", "ZZI", "--dump-tree", str(tree), "--json"]
    )
    assert payload["effective"][1] == "ZZI"
    assert payload["commutators"] == 0
    reports = _json_output(capsys, ["verify", str(tree), "--json"])
    assert len(reports) == 1
    assert reports[0]["error"] <= 1e-9


def test_verify_ladder_prints_csv(
    write_hamiltonian, tmp_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    path = write_hamiltonian("h.ham", TWO_TERM)
    tree = tmp_path / "zzi.json"
    main(["synthesize", str(path), "--target", "ZZI", "--dump-tree", str(tree), "-q"])
    capsys.readouterr()
    assert main(["verify", str(tree), "--ladder", "0.1", "0.05"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "file,step,commutator_step,error"
    assert len(lines) == 3
    assert lines[1].startswith(f"{tree},0.1,0.1,")


def test_encoded_tree_reports_fidelity(
    write_hamiltonian, tmp_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    path = write_hamiltonian("zzz.ham", "1 ZZZ\n")
    tree = tmp_path / "xy.json"
    payload = _json_output(
        capsys,
        [
            "synthesize", str(path), "--target", "XY", "--encoded",
            "--dump-tree", str(tree), "--json",
        ],
    )
    assert payload["ancilla"] == 2
    assert payload["ancilla_state"] == "|0>"
    assert payload["logical_target"] == "XY"
    document = json.loads(tree.read_text(encoding="utf-8"))
    assert document["ancilla"] == 2
    (report,) = _json_output(capsys, ["verify", str(tree), "--json"])
    assert report["fidelity"] == pytest.approx(1.0, abs=1e-9)
    assert report["min_ancilla_population"] == pytest.approx(1.0, abs=1e-9)


def test_verify_rejects_non_derivation_json(
    tmp_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    path = tmp_path / "other.json"
    path.write_text('{"format": "something"}', encoding="utf-8")
    assert main(["verify", str(path)]) == EXIT_ERROR
    assert "not a derivation document" in capsys.readouterr().err


def test_synthesis_errors_exit_one(
    write_hamiltonian, capsys: pytest.CaptureFixture[str]
) -> None:
    path = write_hamiltonian("h.ham", "1 XXX\n")
    assert main(["synthesize", str(path), "--target", "XXI"]) == EXIT_ERROR
    assert "even weight" in capsys.readouterr().err


def test_sweep_csv_does_not_depend_on_threads(capsys: pytest.CaptureFixture[str]) -> None:
    argv = ["sweep", "chain", "--n", "4", "5", "--m", "3", "--trials", "20", "--seed", "1"]
    capsys.readouterr()
    assert main([*argv, "--threads", "1"]) == EXIT_OK
    serial = capsys.readouterr().out
    assert main([*argv, "--threads", "3"]) == EXIT_OK
    parallel = capsys.readouterr().out
    assert serial == parallel
    lines = serial.splitlines()
    assert lines[0] == ",".join(SWEEP_COLUMNS)
    assert len(lines) == 3
    assert lines[1].startswith("chain,4,5,3,20,")


def test_sweep_rejects_bad_thread_counts(capsys: pytest.CaptureFixture[str]) -> None:
    argv = ["sweep", "chain", "--n", "4", "--m", "3", "--trials", "5", "--threads", "0"]
    assert main(argv) == EXIT_ERROR
    assert "--threads" in capsys.readouterr().err


def test_embedding(capsys: pytest.CaptureFixture[str]) -> None:
    (report,) = _json_output(capsys, ["embedding", "--n", "2", "--json"])
    assert report["passed"] is True
    assert report["algebra"] == "so"


@pytest.mark.parametrize(
    ("argv", "fragment"),
    [
        (["synthesize", "{path}", "--target", "XQX"], "invalid Pauli letter"),
        (["closure", "{path}", "--target", "X?X"], "invalid Pauli letter"),
    ],
    ids=["synthesize", "closure"],
)
def test_bad_target_letters_exit_one(
    write_hamiltonian, capsys: pytest.CaptureFixture[str], argv: list[str], fragment: str
) -> None:
    path = write_hamiltonian("h.ham", TWO_TERM)
    argv = [str(path) if arg == "{path}" else arg for arg in argv]
    assert main(argv) == EXIT_ERROR
    err = capsys.readouterr().err
    assert err.startswith("[pauli-universality] bad target: ")
    assert fragment in err


def test_sweep_rejects_too_few_qubits(capsys: pytest.CaptureFixture[str]) -> None:
    argv = ["sweep", "chain", "--n", "1", "--m", "2", "--trials", "3", "--seed", "1"]
    assert main(argv) == EXIT_ERROR
    err = capsys.readouterr().err
    assert err.startswith("[pauli-universality] ")
    assert "at least 2 qubits" in err


def test_sweep_rows_carry_the_bound_inputs(capsys: pytest.CaptureFixture[str]) -> None:
    argv = ["sweep", "chain", "--n", "6", "--m", "4", "--trials", "10", "--seed", "2", "--json"]
    (row,) = _json_output(capsys, argv)
    assert row["N"] == 9
    assert row["other_terms"] == 8
    assert row["bound"] == pytest.approx(row["other_terms"] / 2 ** row["m"])
