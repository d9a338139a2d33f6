"""Command-line surface for reproducible batch workflows.

Subcommands: ``run`` (one pattern, one scenario), ``suite`` (the full
benchmark from a manifest), ``tomo`` (state tomography of one pattern),
``ingest`` (validate and metric a hardware counts file), and ``report``
(rebuild report files from stored results).

Exit codes: 0 success, 2 invalid arguments, 3 snapshot errors, 4 I/O
failures, 5 register too large.  Logs go to stderr only; machine-readable
output goes to files or stdout.  Every random draw flows from ``--seed``;
when omitted, a fresh seed is drawn and logged so the run stays
replayable.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import secrets as _secrets
import sys
from pathlib import Path

from .circuits import OracleStyle, SecretString, build_bv_circuit
from .harness import (
    IngestError,
    ReportFormat,
    Scenario,
    TestPattern,
    generate_report,
    ingest_hardware_counts,
    load_manifest,
    Manifest,
    run_scenario,
    run_suite,
)
from .noise import CalibrationError, build_noise_model, load_snapshot
from .simulator import RegisterTooLargeError
from .tomography import MAX_TOMOGRAPHY_QUBITS, run_qst

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SNAPSHOT = 3
EXIT_IO = 4
EXIT_TOO_LARGE = 5

log = logging.getLogger("bvbench")


class UsageError(ValueError):
    pass


def _parse_secret(text: str) -> SecretString:
    try:
        return SecretString(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _resolve_seed(seed: int | None) -> int:
    if seed is None:
        seed = _secrets.randbits(63)
        log.info("no --seed given; using generated seed %d", seed)
    return seed


def _load_snapshot_arg(path: str | None):
    if path is None:
        return None
    try:
        return load_snapshot(path)
    except (OSError, json.JSONDecodeError, CalibrationError) as exc:
        raise SnapshotFailure(f"cannot load snapshot {path}: {exc}") from exc


class SnapshotFailure(RuntimeError):
    pass


def _write_json(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding="utf-8")


def _cmd_run(args: argparse.Namespace) -> int:
    secret = _parse_secret(args.secret)
    scenario = Scenario.NOISY if args.scenario == "noisy" else Scenario.IDEAL
    snapshot = _load_snapshot_arg(args.snapshot)
    if scenario is Scenario.NOISY and snapshot is None:
        raise SnapshotFailure("--scenario noisy requires --snapshot")
    seed = _resolve_seed(args.seed)
    pattern = TestPattern.make(secret.bits)
    result = run_scenario(
        pattern,
        scenario,
        snapshot=snapshot,
        shots=args.shots,
        seed=seed,
        oracle_style=OracleStyle(args.oracle.upper()),
        exact_ideal=args.exact,
    )
    _write_json(result.to_dict(), args.out)
    log.info(
        "%s %s: success %.1f%%, hellinger %.3f",
        pattern.label,
        scenario.value,
        result.metrics.success_probability,
        result.metrics.hellinger,
    )
    return EXIT_OK


def _cmd_suite(args: argparse.Namespace) -> int:
    manifest = load_manifest(args.manifest) if args.manifest else Manifest()
    out_dir = args.out_dir or os.environ.get("BVBENCH_OUT_DIR") or manifest.out_dir
    if out_dir is None:
        raise UsageError("no output directory: pass --out-dir, set BVBENCH_OUT_DIR, "
                         "or put out_dir in the manifest")
    if args.jobs is not None:
        manifest = Manifest(**{**manifest.__dict__, "jobs": args.jobs})
    results, written = run_suite(manifest, out_dir)
    for path in written:
        log.info("wrote %s", path)
    return EXIT_OK


def _cmd_tomo(args: argparse.Namespace) -> int:
    secret = _parse_secret(args.secret)
    if len(secret) > MAX_TOMOGRAPHY_QUBITS:
        raise RegisterTooLargeError(
            f"tomography limited to {MAX_TOMOGRAPHY_QUBITS} data qubits, got {len(secret)}"
        )
    snapshot = _load_snapshot_arg(args.snapshot)
    if args.scenario == "noisy" and snapshot is None:
        raise SnapshotFailure("--scenario noisy requires --snapshot")
    model = build_noise_model(snapshot) if args.scenario == "noisy" else None
    seed = _resolve_seed(args.seed)
    circuit = build_bv_circuit(secret, OracleStyle(args.oracle.upper()))
    result = run_qst(circuit, model, args.shots, seed)
    _write_json(result.to_dict(), args.out)
    log.info("tomography of %s (%s): fidelity %.4f", secret.bits, args.scenario, result.fidelity)
    return EXIT_OK


def _cmd_ingest(args: argparse.Namespace) -> int:
    result = ingest_hardware_counts(args.file)
    _write_json(result.to_dict(), args.out)
    log.info(
        "ingested %s: success %.1f%%",
        args.file,
        result.metrics.success_probability,
    )
    return EXIT_OK


def _cmd_report(args: argparse.Namespace) -> int:
    results = []
    result_dir = Path(args.results)
    for path in sorted(result_dir.glob("*.json")):
        payload = json.loads(path.read_text(encoding="utf-8"))
        results.append(_scenario_result_from_dict(payload))
    if not results:
        raise UsageError(f"no result files found in {result_dir}")
    formats = (
        [ReportFormat.CSV, ReportFormat.JSON, ReportFormat.PLOTDATA]
        if args.format == "all"
        else [ReportFormat(args.format.upper())]
    )
    for fmt in formats:
        for path in generate_report(results, fmt, args.out_dir):
            log.info("wrote %s", path)
    return EXIT_OK


def _scenario_result_from_dict(payload: dict):
    from .harness import ScenarioResult
    from .metrics import MetricReport
    from .simulator import CountsDistribution

    pattern = TestPattern.make(
        payload["pattern"]["secret"],
        label=payload["pattern"].get("label"),
    )
    metrics = MetricReport(
        success_probability=float(payload["metrics"]["success_probability"]),
        hellinger=float(payload["metrics"]["hellinger"]),
        hamming_error_histogram={
            int(k): float(v)
            for k, v in payload["metrics"]["hamming_error_histogram"].items()
        },
    )
    return ScenarioResult(
        pattern=pattern,
        scenario=Scenario(payload["scenario"]),
        counts=CountsDistribution.from_dict(payload["counts"]),
        metrics=metrics,
        fidelity=payload.get("fidelity"),
        provenance=payload.get("provenance", ""),
        seed=payload.get("seed"),
        backend_name=payload.get("backend_name"),
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bvbench",
        description="Hidden-string benchmark suite: simulation, noise emulation, tomography.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one pattern under one scenario")
    run_p.add_argument("--secret", required=True, help="hidden bitstring over {0,1}")
    run_p.add_argument("--scenario", choices=["ideal", "noisy"], default="ideal")
    run_p.add_argument("--snapshot", help="calibration snapshot JSON (required for noisy)")
    run_p.add_argument("--shots", type=int, default=20000)
    run_p.add_argument("--seed", type=int)
    run_p.add_argument("--oracle", choices=["cnot", "ecr"], default="cnot")
    run_p.add_argument("--exact", action="store_true",
                       help="ideal scenario: write exact expected counts instead of sampling")
    run_p.add_argument("--out", help="output JSON path (default: stdout)")
    run_p.set_defaults(func=_cmd_run)

    suite_p = sub.add_parser("suite", help="run the benchmark suite from a manifest")
    suite_p.add_argument("--manifest", help="manifest JSON path (default: built-in ideal-only run)")
    suite_p.add_argument("--out-dir", help="output directory (fallback: $BVBENCH_OUT_DIR)")
    suite_p.add_argument("--jobs", type=int, help="parallel jobs (default 1, manifest may override)")
    suite_p.set_defaults(func=_cmd_suite)

    tomo_p = sub.add_parser("tomo", help="state tomography of one pattern")
    tomo_p.add_argument("--secret", required=True)
    tomo_p.add_argument("--scenario", choices=["ideal", "noisy"], default="ideal")
    tomo_p.add_argument("--snapshot")
    tomo_p.add_argument("--shots", type=int, default=21000)
    tomo_p.add_argument("--seed", type=int)
    tomo_p.add_argument("--oracle", choices=["cnot", "ecr"], default="cnot")
    tomo_p.add_argument("--out", help="output JSON path (default: stdout)")
    tomo_p.set_defaults(func=_cmd_tomo)

    ingest_p = sub.add_parser("ingest", help="validate and metric a hardware counts file")
    ingest_p.add_argument("--file", required=True)
    ingest_p.add_argument("--out", help="output JSON path (default: stdout)")
    ingest_p.set_defaults(func=_cmd_ingest)

    report_p = sub.add_parser("report", help="rebuild reports from stored result JSONs")
    report_p.add_argument("--results", required=True, help="directory of ScenarioResult JSON files")
    report_p.add_argument("--format", choices=["csv", "json", "plotdata", "all"], default="all")
    report_p.add_argument("--out-dir", required=True)
    report_p.set_defaults(func=_cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(message)s")
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        log.error("error: %s", exc)
        return EXIT_USAGE
    except (IngestError, ValueError) as exc:
        if isinstance(exc, RegisterTooLargeError):
            log.error("error: %s", exc)
            return EXIT_TOO_LARGE
        if isinstance(exc, CalibrationError):
            log.error("error: %s", exc)
            return EXIT_SNAPSHOT
        log.error("error: %s", exc)
        return EXIT_USAGE
    except SnapshotFailure as exc:
        log.error("error: %s", exc)
        return EXIT_SNAPSHOT
    except OSError as exc:
        log.error("I/O error: %s", exc)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
