"""Top-level ``pauli-universality`` CLI.

Usage::

    pauli-universality classify FILE
    pauli-universality closure FILE [--no-local] [--target STRING] [--list]
    pauli-universality isolate FILE [--term TERM] [--method det|rand] [--m M] [--seed SEED]
    pauli-universality synthesize FILE --target STRING [--encoded] [--dump-tree PATH]
    pauli-universality verify TREE [TREE ...] [--time T] [--delta D] [--ladder D ...]
    pauli-universality sweep FAMILY --n N [N ...] --m M [M ...] [--trials K] [--seed SEED]
    pauli-universality embedding [--n N ...]

Every subcommand prints a human-readable report, or only the JSON report
with ``--json``; ``-o PATH`` also writes the machine-readable report to PATH.
``classify`` exits 0 for universal, 2 for odd entangling and 3 for
non-entangling Hamiltonians. Any error exits 1.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from pauli_universality.config import RunConfig, resolve_seed, resolve_threads
from pauli_universality.derivation import (
    count_commutators,
    depth,
    effective_term,
    iter_nodes,
    replay,
    tree_from_json,
    tree_to_json,
)
from pauli_universality.errors import HamiltonianParseError, PauliUniversalityError
from pauli_universality.families import FAMILIES
from pauli_universality.hamiltonian import (
    ClassificationKind,
    Hamiltonian,
    classify,
    load_hamiltonian,
)
from pauli_universality.isolation import (
    RandomizedIsolationParams,
    apply_schedule_symbolic,
    deterministic_isolation_schedule,
    isolation_sweep,
    randomized_isolation,
    resolve_term,
    schedule_to_json,
)
from pauli_universality.lie_closure import close, extract_derivation
from pauli_universality.numeric import (
    TrotterParams,
    check_lie_embedding,
    encoded_report,
    trotter_ladder,
    verify,
)
from pauli_universality.synthesis import (
    ANCILLA_STATE,
    derive_encoded,
    expand_given_leaves,
    leaves_of,
    synthesize,
)

PROG = "pauli-universality"
LOG_FORMAT = f"[{PROG}] %(levelname)s %(name)s: %(message)s"

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_ODD = 2
EXIT_NOT_ENTANGLING = 3

_CLASSIFY_EXIT_CODES = {
    ClassificationKind.UNIVERSAL: EXIT_OK,
    ClassificationKind.ODD_ENTANGLING: EXIT_ODD,
    ClassificationKind.NOT_ENTANGLING: EXIT_NOT_ENTANGLING,
}

logger = logging.getLogger(__name__)


class InputError(PauliUniversalityError):
    """An input file could not be read or parsed; the message names it."""


@dataclass(frozen=True, slots=True)
class CommandOutput:
    payload: Any
    text: str
    exit_code: int = EXIT_OK


def _dumps(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _terms_json(h: Hamiltonian) -> list[list[Any]]:
    return [[term.coefficient, term.label] for term in h.terms]


def _load(path: Path) -> Hamiltonian:
    try:
        return load_hamiltonian(path)
    except HamiltonianParseError as exc:
        raise InputError(f"{path}: {exc}") from exc
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc


def _load_tree_document(path: Path) -> dict[str, Any]:
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(document, dict):
        raise InputError(f"{path}: expected a JSON object")
    return document


# ── classify ───────────────────────────────────────────────────────────


def cmd_classify(config: RunConfig) -> CommandOutput:
    path = config.inputs[0]
    h = _load(path)
    classification = classify(h)
    census = h.parity_census()
    payload = {
        "file": str(path),
        "terms": len(h),
        "census": census,
        **classification.to_dict(),
    }
    groups = " ".join("{" + ",".join(map(str, c)) + "}" for c in classification.components)
    text = "\n".join(
        [
            f"{path}: {classification.summary}",
            f"  qubits: {h.num_qubits}",
            f"  terms: {len(h)} (odd {census['odd_terms']}, even {census['even_terms']})",
            f"  components: {groups}",
        ]
    )
    return CommandOutput(payload, text, _CLASSIFY_EXIT_CODES[classification.kind])


# ── closure ────────────────────────────────────────────────────────────


def cmd_closure(
    config: RunConfig, *, local: bool, target: str | None, listing: bool
) -> CommandOutput:
    path = config.inputs[0]
    h = _load(path)
    closure = close(h, include_local_unitaries=local)
    payload: dict[str, Any] = {
        "file": str(path),
        "num_qubits": h.num_qubits,
        "local_unitaries": local,
        "dimension": closure.dimension,
        "levels": closure.levels,
        "algebra": closure.algebra.value,
        "all_odd": closure.all_odd,
        "weights": {str(w): c for w, c in closure.weight_histogram.items()},
    }
    lines = [
        f"{path}: closure dimension {closure.dimension} ({closure.algebra.value}) "
        f"after {closure.levels} levels",
        "  weights: "
        + ", ".join(f"{w}:{c}" for w, c in closure.weight_histogram.items()),
    ]
    if listing:
        payload["elements"] = list(closure.labels)
        lines.extend(f"  {label}" for label in closure.labels)
    if target is not None:
        tree = extract_derivation(closure, target)
        payload["derivation"] = tree_to_json(tree)
        lines.append(
            f"  {target}: depth {depth(tree)}, {count_commutators(tree)} commutators, "
            f"replays to {effective_term(tree)}"
        )
    return CommandOutput(payload, "\n".join(lines))


# ── isolate ────────────────────────────────────────────────────────────


def cmd_isolate(config: RunConfig, *, term: str, method: str) -> CommandOutput:
    path = config.inputs[0]
    h = _load(path)
    index = resolve_term(h, term)
    target = h.terms[index]
    payload: dict[str, Any] = {"file": str(path), "method": method, "term": target.label}
    if method == "det":
        schedule = deterministic_isolation_schedule(h, index)
        result = apply_schedule_symbolic(h, schedule)
        success = len(result) == 1 and result.terms[0].pauli == target.pauli
    else:
        assert config.seed is not None
        (m,) = config.m
        outcome = randomized_isolation(h, RandomizedIsolationParams(m, config.seed, index))
        schedule, result, success = outcome.schedule, outcome.result, outcome.success
        payload["seed"] = config.seed
        payload["draws"] = outcome.draws
    payload.update(
        {
            "schedule": schedule_to_json(schedule),
            "scale": schedule.scale,
            "layers": len(schedule.layers),
            "result": _terms_json(result),
            "success": success,
        }
    )
    text = "\n".join(
        [
            f"{path}: isolate {target.label} ({method})",
            f"  layers: {len(schedule.layers)}, scale {schedule.scale}",
            f"  result: {result}",
            f"  success: {'yes' if success else 'no'}",
        ]
    )
    return CommandOutput(payload, text)


# ── synthesize ─────────────────────────────────────────────────────────


def cmd_synthesize(
    config: RunConfig,
    *,
    target: str,
    encoded: bool,
    expand: bool,
    dump_tree: Path | None,
) -> CommandOutput:
    path = config.inputs[0]
    h = _load(path)
    metadata: dict[str, Any] = {}
    if encoded:
        result = derive_encoded(h, target)
        tree = result.tree
        metadata = {
            "ancilla": result.ancilla,
            "ancilla_state": ANCILLA_STATE,
            "logical_qubits": list(result.logical_qubits),
            "logical_target": result.logical_target.label,
        }
    else:
        tree = synthesize(h, target)
    if expand:
        tree = expand_given_leaves(tree, h)
    replay(tree)
    effective = effective_term(tree)
    payload: dict[str, Any] = {
        "file": str(path),
        "target": target,
        "effective": [effective.coefficient, effective.label],
        "depth": depth(tree),
        "commutators": count_commutators(tree),
        "nodes": sum(1 for _ in iter_nodes(tree)),
        "leaves": dict(leaves_of(tree)),
        **metadata,
    }
    lines = [
        f"{path}: {target} via {effective}",
        f"  depth {payload['depth']}, {payload['commutators']} commutators, "
        f"{payload['nodes']} nodes",
    ]
    if encoded:
        lines.append(f"  ancilla qubit {metadata['ancilla']} held in {ANCILLA_STATE}")
    if dump_tree is not None:
        dump_tree.write_text(_dumps(tree_to_json(tree, **metadata)), encoding="utf-8")
        lines.append(f"  tree written to {dump_tree}")
    return CommandOutput(payload, "\n".join(lines))


# ── verify ─────────────────────────────────────────────────────────────


def cmd_verify(config: RunConfig, *, ladder: Sequence[float] | None) -> CommandOutput:
    assert config.total_time is not None
    total_time = config.total_time
    reports: list[dict[str, Any]] = []
    lines: list[str] = []
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["file", "step", "commutator_step", "error"])
    for path in config.inputs:
        document = _load_tree_document(path)
        tree = tree_from_json(document)
        if ladder:
            deltas = None
            if config.commutator_step is not None:
                deltas = [config.commutator_step] * len(ladder)
            for row in trotter_ladder(tree, total_time, ladder, deltas):
                reports.append(
                    {
                        "file": str(path),
                        "step": row.step,
                        "commutator_step": row.commutator_step,
                        "error": row.error,
                    }
                )
                writer.writerow([path, row.step, row.commutator_step, repr(row.error)])
            continue
        assert config.step is not None
        params = TrotterParams(total_time, config.step, config.commutator_step)
        report: dict[str, Any] = {
            "file": str(path),
            "time": total_time,
            "step": params.step,
            "commutator_step": params.delta,
            "error": verify(tree, params),
        }
        line = f"{path}: error {report['error']:.3e} at t={total_time:g}, step={params.step:g}"
        ancilla = document.get("ancilla")
        if ancilla is not None:
            encoded = encoded_report(tree, int(ancilla), params)
            report["fidelity"] = encoded.fidelity
            report["min_ancilla_population"] = encoded.min_ancilla_population
            report["final_ancilla_population"] = encoded.final_ancilla_population
            line += (
                f"\n  logical fidelity {encoded.fidelity:.6f}, "
                f"ancilla population >= {encoded.min_ancilla_population:.12f}"
            )
        reports.append(report)
        lines.append(line)
    if ladder:
        return CommandOutput(reports, buffer.getvalue().rstrip("\n"))
    return CommandOutput(reports, "\n".join(lines))


# ── sweep ──────────────────────────────────────────────────────────────

SWEEP_COLUMNS = (
    "family",
    "n",
    "N",
    "m",
    "trials",
    "failures",
    "failure_rate",
    "other_terms",
    "bound",
    "acceptance_rate",
    "seed",
)


def cmd_sweep(
    config: RunConfig, *, family: str, sizes: Sequence[int], term: str
) -> CommandOutput:
    assert config.seed is not None and config.trials is not None
    rows: list[dict[str, Any]] = []
    for n in sizes:
        h = FAMILIES[family](n)
        for m in config.m:
            result = isolation_sweep(
                h,
                term=term,
                m=m,
                trials=config.trials,
                seed=config.seed,
                threads=config.threads,
            )
            rows.append(
                {
                    "family": family,
                    "n": result.num_qubits,
                    "N": result.num_terms,
                    "m": result.m,
                    "trials": result.trials,
                    "failures": result.failures,
                    "failure_rate": result.failure_rate,
                    "other_terms": result.other_terms,
                    "bound": result.bound,
                    "acceptance_rate": result.acceptance_rate,
                    "seed": result.seed,
                }
            )
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return CommandOutput(rows, buffer.getvalue().rstrip("\n"))


# ── embedding ──────────────────────────────────────────────────────────


def cmd_embedding(sizes: Sequence[int]) -> CommandOutput:
    reports = []
    lines = []
    for n in sizes:
        report = check_lie_embedding(n)
        reports.append(
            {
                "num_qubits": report.num_qubits,
                "algebra": report.algebra,
                "odd_checked": report.odd_checked,
                "odd_passed": report.odd_passed,
                "even_checked": report.even_checked,
                "even_rejected": report.even_rejected,
                "max_residual": report.max_residual,
                "passed": report.passed,
            }
        )
        lines.append(
            f"n={n}: {report.odd_passed}/{report.odd_checked} odd strings in "
            f"{report.algebra}({2**n}), {report.even_rejected}/{report.even_checked} "
            f"even strings rejected, max residual {report.max_residual:.1e}"
        )
    exit_code = EXIT_OK if all(r["passed"] for r in reports) else EXIT_ERROR
    return CommandOutput(reports, "\n".join(lines), exit_code)


# ── wiring ─────────────────────────────────────────────────────────────


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "-v", "--verbose", action="count", default=0,
        help="Log progress to stderr (-v info, -vv debug)",
    )
    common.add_argument("-q", "--quiet", action="store_true", help="Only log errors")
    common.add_argument(
        "--json", dest="json_only", action="store_true",
        help="Print only the machine-readable report",
    )
    common.add_argument(
        "-o", "--output", type=Path, default=None,
        help="Also write the machine-readable report to this file",
    )
    return common


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG,
        description="Classify, close, isolate and synthesize Pauli Hamiltonians",
    )
    sub = parser.add_subparsers(dest="command")
    common = _common_options()

    classify_p = sub.add_parser(
        "classify", parents=[common], help="Universality class of a Hamiltonian"
    )
    classify_p.add_argument("file", type=Path)

    closure_p = sub.add_parser("closure", parents=[common], help="Lie closure of the terms")
    closure_p.add_argument("file", type=Path)
    closure_p.add_argument(
        "--no-local", action="store_true",
        help="Close the terms alone, without free single-qubit Paulis",
    )
    closure_p.add_argument("--target", default=None, help="Extract a derivation of this string")
    closure_p.add_argument(
        "--list", dest="listing", action="store_true", help="List every element"
    )

    isolate_p = sub.add_parser("isolate", parents=[common], help="Isolate one term")
    isolate_p.add_argument("file", type=Path)
    isolate_p.add_argument("--term", default="0", help="Term index or Pauli string (default: 0)")
    isolate_p.add_argument("--method", choices=("det", "rand"), default="det")
    isolate_p.add_argument("--m", type=int, default=8, help="Random layers (default: 8)")
    isolate_p.add_argument("--seed", type=int, default=None)

    synth_p = sub.add_parser("synthesize", parents=[common], help="Derive a target coupling")
    synth_p.add_argument("file", type=Path)
    synth_p.add_argument("--target", required=True, help="Pauli string to simulate")
    synth_p.add_argument(
        "--encoded", action="store_true",
        help="Simulate the target on n-1 logical qubits with an ancilla in |0>",
    )
    synth_p.add_argument(
        "--expand-isolation", action="store_true",
        help="Replace each given term by an exact isolation from the full Hamiltonian",
    )
    synth_p.add_argument("--dump-tree", type=Path, default=None, help="Write the tree as JSON")

    verify_p = sub.add_parser(
        "verify", parents=[common], help="Compile derivation trees and measure their error"
    )
    verify_p.add_argument("trees", type=Path, nargs="+")
    verify_p.add_argument("--time", type=float, default=0.1, help="Total time (default: 0.1)")
    verify_p.add_argument("--delta", type=float, default=0.01, help="Slice width (default: 0.01)")
    verify_p.add_argument(
        "--commutator-step", type=float, default=None,
        help="Group-commutator step (default: the slice width)",
    )
    verify_p.add_argument(
        "--ladder", type=float, nargs="+", default=None,
        help="Run at each slice width and print CSV",
    )

    sweep_p = sub.add_parser(
        "sweep", parents=[common], help="Randomized isolation failure rates as CSV"
    )
    sweep_p.add_argument("family", choices=sorted(FAMILIES))
    sweep_p.add_argument("--n", type=int, nargs="+", required=True)
    sweep_p.add_argument("--m", type=int, nargs="+", required=True)
    sweep_p.add_argument("--trials", type=int, default=2000)
    sweep_p.add_argument("--seed", type=int, default=None)
    sweep_p.add_argument("--term", default="0")
    sweep_p.add_argument(
        "--threads", type=int, default=None,
        help="Worker threads (default: $PAULI_UNIVERSALITY_THREADS or the CPU count)",
    )

    embed_p = sub.add_parser(
        "embedding", parents=[common], help="Check the so/sp embedding of odd strings"
    )
    embed_p.add_argument("--n", type=int, nargs="+", default=[2, 3, 4])
    return parser


def _configure_logging(verbosity: int, quiet: bool) -> None:
    if quiet:
        level = logging.ERROR
    elif verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    package_logger = logging.getLogger("pauli_universality")
    for handler in list(package_logger.handlers):
        if getattr(handler, "_pauli_universality_cli", False):
            package_logger.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler._pauli_universality_cli = True  # type: ignore[attr-defined]
    package_logger.addHandler(handler)
    package_logger.setLevel(level)


def _run_config(args: argparse.Namespace) -> RunConfig:
    command = args.command
    inputs: tuple[Path, ...] = ()
    if command == "verify":
        inputs = tuple(args.trees)
    elif hasattr(args, "file"):
        inputs = (args.file,)
    randomized = command == "sweep" or (command == "isolate" and args.method == "rand")
    m: tuple[int, ...] = ()
    if command == "sweep":
        m = tuple(args.m)
    elif command == "isolate":
        m = (args.m,)
    return RunConfig(
        command=command,
        inputs=inputs,
        output=args.output,
        seed=resolve_seed(args.seed) if randomized else getattr(args, "seed", None),
        threads=resolve_threads(args.threads) if command == "sweep" else 1,
        verbosity=-1 if args.quiet else args.verbose,
        json_only=args.json_only,
        m=m,
        trials=getattr(args, "trials", None),
        total_time=getattr(args, "time", None),
        step=getattr(args, "delta", None),
        commutator_step=getattr(args, "commutator_step", None),
    )


def _dispatch(config: RunConfig, args: argparse.Namespace) -> CommandOutput:
    handlers: dict[str, Callable[[], CommandOutput]] = {
        "classify": lambda: cmd_classify(config),
        "closure": lambda: cmd_closure(
            config, local=not args.no_local, target=args.target, listing=args.listing
        ),
        "isolate": lambda: cmd_isolate(config, term=args.term, method=args.method),
        "synthesize": lambda: cmd_synthesize(
            config,
            target=args.target,
            encoded=args.encoded,
            expand=args.expand_isolation,
            dump_tree=args.dump_tree,
        ),
        "verify": lambda: cmd_verify(config, ladder=args.ladder),
        "sweep": lambda: cmd_sweep(config, family=args.family, sizes=args.n, term=args.term),
        "embedding": lambda: cmd_embedding(args.n),
    }
    return handlers[config.command]()


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)

    if args.command is None:
        parser.print_help()
        return EXIT_OK

    _configure_logging(args.verbose, args.quiet)
    try:
        config = _run_config(args)
        logger.debug("running %s", config)
        output = _dispatch(config, args)
        if config.output is not None:
            config.output.write_text(_dumps(output.payload), encoding="utf-8")
    except PauliUniversalityError as exc:
        print(f"[{PROG}] {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"[{PROG}] {exc}", file=sys.stderr)
        return EXIT_ERROR

    if config.json_only:
        sys.stdout.write(_dumps(output.payload))
    else:
        print(output.text)
    return output.exit_code


if __name__ == "__main__":
    sys.exit(main())
