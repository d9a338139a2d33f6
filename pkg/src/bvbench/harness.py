"""Benchmark suite: pattern catalog, scenario orchestration, and reports.

The built-in suite holds the 11 benchmark rows (one pattern, `111111`,
appears twice: once as a suite entry and once as a dedicated
reproducibility-validation row).  Each pattern runs under up to three
scenarios: IDEAL (exact statevector), NOISY (density-matrix emulation
from a calibration snapshot), and HARDWARE_INGESTED (real-device counts
read from files, never simulated).  Reports mirror the benchmark table:
per-pattern rows with success probability, Hellinger distance and
optional tomography fidelity per scenario, plus recomputable aggregates.

Hardware numbers only ever enter through :func:`ingest_hardware_counts`;
nothing in this module fabricates a hardware value.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Mapping, Sequence

from .circuits import OracleStyle, SecretString, build_bv_circuit, _coerce_secret
from .metrics import (
    MetricReport,
    compute_metrics,
    kendalls_w,
    pearson_r,
    performance_gap,
    rank_scores,
)
from .noise import CalibrationSnapshot, build_noise_model
from .seeding import spawn_seed
from .simulator import (
    CountsDistribution,
    ExecutionConfig,
    ExecutionMode,
    exact_distribution,
    run_ideal,
    run_noisy,
)
from .tomography import MAX_TOMOGRAPHY_QUBITS, TomographyResult, run_qst


class IngestError(ValueError):
    """Raised for malformed or inconsistent hardware counts files."""


class Scenario(str, Enum):
    IDEAL = "IDEAL"
    NOISY = "NOISY"
    HARDWARE_INGESTED = "HARDWARE_INGESTED"


_SCENARIO_COLUMN = {
    Scenario.IDEAL: "ideal",
    Scenario.NOISY: "emulation",
    Scenario.HARDWARE_INGESTED: "hardware",
}


class PatternCategory(str, Enum):
    BASELINE = "BASELINE"
    SENSITIVITY = "SENSITIVITY"
    ALTERNATING = "ALTERNATING"
    SYMMETRIC = "SYMMETRIC"
    MIRROR = "MIRROR"
    MEDIUM_DENSITY = "MEDIUM_DENSITY"
    HIGH_DENSITY = "HIGH_DENSITY"
    VERY_HIGH_DENSITY = "VERY_HIGH_DENSITY"


def category_matches(category: PatternCategory, secret: "SecretString | str") -> bool:
    """Whether a category's structural predicate holds for a secret string."""
    secret = _coerce_secret(secret)
    bits = secret.bits
    n = len(bits)
    half = n // 2
    d = secret.density
    if category is PatternCategory.BASELINE:
        return secret.hamming_weight == 0
    if category is PatternCategory.SENSITIVITY:
        return secret.hamming_weight == 1
    if category is PatternCategory.ALTERNATING:
        return all(bits[i] != bits[i + 1] for i in range(n - 1))
    if category is PatternCategory.SYMMETRIC:
        return n % 2 == 0 and bits[:half] == bits[half:]
    if category is PatternCategory.MIRROR:
        return n % 2 == 0 and bits[:half][::-1] == bits[half:]
    if category is PatternCategory.MEDIUM_DENSITY:
        return 0.0 < d <= 2.0 / 3.0
    if category is PatternCategory.HIGH_DENSITY:
        return d > 2.0 / 3.0 and n < 10
    if category is PatternCategory.VERY_HIGH_DENSITY:
        return d > 2.0 / 3.0 and n >= 10
    return False


def classify_secret(secret: "SecretString | str") -> PatternCategory:
    """Heuristic category for user-supplied patterns (built-ins are pinned)."""
    secret = _coerce_secret(secret)
    for category in (
        PatternCategory.BASELINE,
        PatternCategory.SENSITIVITY,
        PatternCategory.VERY_HIGH_DENSITY,
        PatternCategory.HIGH_DENSITY,
        PatternCategory.ALTERNATING,
        PatternCategory.MIRROR,
        PatternCategory.SYMMETRIC,
        PatternCategory.MEDIUM_DENSITY,
    ):
        if category_matches(category, secret):
            return category
    raise ValueError(f"no category matches secret {secret.bits!r}")


@dataclass(frozen=True)
class TestPattern:
    __test__ = False  # keep pytest from collecting this as a test class

    secret: SecretString
    category: PatternCategory
    label: str

    def __post_init__(self):
        if not category_matches(self.category, self.secret):
            raise ValueError(
                f"category {self.category.value} is inconsistent with secret {self.secret.bits!r}"
            )

    @classmethod
    def make(cls, bits: str, category: PatternCategory | None = None, label: str | None = None):
        secret = SecretString(bits)
        return cls(
            secret=secret,
            category=category or classify_secret(secret),
            label=label or bits,
        )

    @property
    def complexity(self) -> float:
        """Qubit count times pattern density."""
        return len(self.secret) * self.secret.density


def builtin_suite() -> tuple[TestPattern, ...]:
    """The 11 benchmark rows.  `111111` appears twice: once as the suite
    entry and once as the reproducibility-validation row."""
    return (
        TestPattern.make("000000", PatternCategory.BASELINE),
        TestPattern.make("000001", PatternCategory.SENSITIVITY),
        TestPattern.make("101010", PatternCategory.ALTERNATING),
        TestPattern.make("011011", PatternCategory.SYMMETRIC),
        TestPattern.make("10011001", PatternCategory.MIRROR),
        TestPattern.make("011101", PatternCategory.MEDIUM_DENSITY),
        TestPattern.make("100100", PatternCategory.MEDIUM_DENSITY),
        TestPattern.make("1111", PatternCategory.HIGH_DENSITY),
        TestPattern.make("111111", PatternCategory.HIGH_DENSITY),
        TestPattern.make("1111111111", PatternCategory.VERY_HIGH_DENSITY),
        TestPattern.make("111111", PatternCategory.HIGH_DENSITY, label="111111-validation"),
    )


QST_PATTERNS_6Q = ("000000", "000001", "101010", "011011", "011101", "111111")


@dataclass(frozen=True, eq=False)
class ScenarioResult:
    """Counts plus metrics for one (pattern, scenario) execution or ingest."""

    pattern: TestPattern
    scenario: Scenario
    counts: CountsDistribution
    metrics: MetricReport
    fidelity: float | None = None
    provenance: str = ""
    seed: int | None = None
    backend_name: str | None = None
    tomography: TomographyResult | None = None

    def __post_init__(self):
        if self.scenario is Scenario.HARDWARE_INGESTED and self.seed is not None:
            raise ValueError("ingested hardware results must not carry a simulation seed")

    def to_dict(self) -> dict:
        return {
            "pattern": {
                "secret": self.pattern.secret.bits,
                "category": self.pattern.category.value,
                "label": self.pattern.label,
            },
            "scenario": self.scenario.value,
            "counts": self.counts.to_dict(),
            "metrics": self.metrics.to_dict(),
            "fidelity": self.fidelity,
            "provenance": self.provenance,
            "seed": self.seed,
            "backend_name": self.backend_name,
        }


def _expected_counts(probs: Mapping[str, float], n_bits: int, shots: int) -> CountsDistribution:
    """Deterministic expected counts: floor shares, remainder by largest
    fractional part (ties to the lexicographically smallest string)."""
    shares = {key: probs[key] * shots for key in sorted(probs)}
    counts = {key: int(share) for key, share in shares.items()}
    remainder = shots - sum(counts.values())
    by_fraction = sorted(shares, key=lambda k: (-(shares[k] - int(shares[k])), k))
    for key in by_fraction[:remainder]:
        counts[key] += 1
    return CountsDistribution(n_bits=n_bits, counts={k: v for k, v in counts.items() if v})


def run_scenario(
    pattern: TestPattern,
    scenario: Scenario,
    *,
    snapshot: CalibrationSnapshot | None = None,
    shots: int = 20000,
    seed: int = 0,
    oracle_style: OracleStyle = OracleStyle.CNOT,
    exact_ideal: bool = True,
    qst_shots: int | None = None,
    ingest_path: "str | Path | None" = None,
    idle_decay: bool = False,
) -> ScenarioResult:
    """Execute one pattern under one scenario and compute its metrics.

    IDEAL defaults to exact expected counts (pass ``exact_ideal=False``
    to sample).  NOISY requires a snapshot.  HARDWARE_INGESTED requires a
    counts file and delegates to :func:`ingest_hardware_counts`.  When
    ``qst_shots`` is set and the register fits, a tomography pass fills
    in the fidelity.
    """
    if scenario is Scenario.HARDWARE_INGESTED:
        if ingest_path is None:
            raise IngestError("HARDWARE_INGESTED scenario requires an ingest file")
        return ingest_hardware_counts(ingest_path)

    circuit = build_bv_circuit(pattern.secret, oracle_style)
    model = None
    if scenario is Scenario.NOISY:
        if snapshot is None:
            raise ValueError("NOISY scenario requires a calibration snapshot")
        model = build_noise_model(snapshot, idle_decay=idle_decay)
        counts = run_noisy(
            circuit, model, ExecutionConfig(shots=shots, seed=seed, mode=ExecutionMode.NOISY_DENSITY)
        )
        provenance = f"snapshot:{snapshot.backend_name}@{snapshot.timestamp}"
    elif scenario is Scenario.IDEAL:
        if exact_ideal:
            counts = _expected_counts(exact_distribution(circuit), len(pattern.secret), shots)
            provenance = "exact-distribution"
        else:
            counts = run_ideal(circuit, ExecutionConfig(shots=shots, seed=seed))
            provenance = "sampled-statevector"
    else:
        raise ValueError(f"unknown scenario {scenario}")

    fidelity = None
    tomo = None
    if qst_shots is not None and len(pattern.secret) <= MAX_TOMOGRAPHY_QUBITS:
        tomo = run_qst(circuit, model, qst_shots, spawn_seed(seed, 101))
        fidelity = tomo.fidelity

    return ScenarioResult(
        pattern=pattern,
        scenario=scenario,
        counts=counts,
        metrics=compute_metrics(counts, pattern.secret),
        fidelity=fidelity,
        provenance=provenance,
        seed=seed,
        tomography=tomo,
    )


def ingest_hardware_counts(path: "str | Path") -> ScenarioResult:
    """Read a hardware counts file and compute metrics from it verbatim.

    Expected JSON schema (the counts schema plus pattern identity):

        {"secret": "000000", "backend_name": "device_a",
         "n_bits": 6, "shots": 20000, "counts": {"000000": 13660, ...},
         "fidelity": 0.111}          # fidelity optional

    Counts must sum to the declared shot total; metrics are computed from
    the file contents and nothing is resampled or smoothed.
    """
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise IngestError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict) or "secret" not in payload:
        raise IngestError(f"{path} is missing the required 'secret' field")
    try:
        secret = SecretString(str(payload["secret"]))
        if int(payload.get("n_bits", len(secret))) != len(secret):
            raise IngestError(
                f"{path}: n_bits = {payload['n_bits']} does not match secret length {len(secret)}"
            )
        counts = CountsDistribution.from_dict(payload)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, IngestError):
            raise
        raise IngestError(f"{path}: malformed counts file: {exc}") from exc

    builtin_by_secret = {p.secret.bits: p for p in builtin_suite()}
    pattern = builtin_by_secret.get(secret.bits) or TestPattern.make(secret.bits)
    if "label" in payload:
        pattern = replace(pattern, label=str(payload["label"]))
    backend = str(payload.get("backend_name", "unknown"))
    fidelity = payload.get("fidelity")
    return ScenarioResult(
        pattern=pattern,
        scenario=Scenario.HARDWARE_INGESTED,
        counts=counts,
        metrics=compute_metrics(counts, secret),
        fidelity=None if fidelity is None else float(fidelity),
        provenance=f"ingest:{backend}:{path.name}",
        seed=None,
        backend_name=backend,
    )


@dataclass(frozen=True)
class ValidationReport:
    """Repeat-run reproducibility summary for one pattern and scenario."""

    pattern: TestPattern
    scenario: Scenario
    shots: int
    seeds: tuple[int, ...]
    successes: tuple[float, ...]

    @property
    def mean(self) -> float:
        return sum(self.successes) / len(self.successes)

    @property
    def spread(self) -> float:
        return max(self.successes) - min(self.successes)


def run_validation(
    pattern: TestPattern,
    n_repeats: int,
    shots: int,
    seed: int,
    *,
    scenario: Scenario = Scenario.NOISY,
    snapshot: CalibrationSnapshot | None = None,
    oracle_style: OracleStyle = OracleStyle.CNOT,
) -> ValidationReport:
    """Repeat one scenario with per-repeat derived seeds; for a fixed
    snapshot any spread is attributable to sampling alone."""
    if n_repeats < 2:
        raise ValueError("n_repeats must be >= 2")
    if scenario is Scenario.HARDWARE_INGESTED:
        raise ValueError("validation runs are simulations; hardware results are ingested")
    seeds = tuple(spawn_seed(seed, r) for r in range(n_repeats))
    successes = []
    for run_seed in seeds:
        result = run_scenario(
            pattern,
            scenario,
            snapshot=snapshot,
            shots=shots,
            seed=run_seed,
            oracle_style=oracle_style,
            exact_ideal=False,
        )
        successes.append(result.metrics.success_probability)
    return ValidationReport(
        pattern=pattern,
        scenario=scenario,
        shots=shots,
        seeds=seeds,
        successes=tuple(successes),
    )


class ReportFormat(str, Enum):
    CSV = "CSV"
    JSON = "JSON"
    PLOTDATA = "PLOTDATA"


def _round(value: float, digits: int) -> float:
    return float(round(value, digits))


def _assemble_rows(results: Sequence[ScenarioResult]) -> list[dict]:
    """Group flat results into per-pattern rows, hardware averaged over devices.

    Values are rounded to their report precision here (success to 0.1
    point, Hellinger and fidelity to 0.001) so every aggregate is exactly
    recomputable from the printed rows.
    """
    order: list[str] = []
    grouped: dict[str, dict] = {}
    for result in results:
        label = result.pattern.label
        if label not in grouped:
            order.append(label)
            grouped[label] = {"pattern": result.pattern, "scenarios": {}, "hardware": []}
        if result.scenario is Scenario.HARDWARE_INGESTED:
            grouped[label]["hardware"].append(result)
        else:
            grouped[label]["scenarios"][result.scenario] = result

    rows = []
    for label in order:
        entry = grouped[label]
        pattern: TestPattern = entry["pattern"]
        row = {
            "label": label,
            "secret": pattern.secret.bits,
            "category": pattern.category.value,
            "qubits": len(pattern.secret),
            "density": pattern.secret.density,
            "complexity": pattern.complexity,
        }
        for scenario in (Scenario.IDEAL, Scenario.NOISY):
            col = _SCENARIO_COLUMN[scenario]
            result = entry["scenarios"].get(scenario)
            row[f"{col}_success"] = (
                None if result is None else _round(result.metrics.success_probability, 1)
            )
            row[f"{col}_hellinger"] = (
                None if result is None else _round(result.metrics.hellinger, 3)
            )
            row[f"{col}_fidelity"] = (
                None if result is None or result.fidelity is None else _round(result.fidelity, 3)
            )
        hardware: list[ScenarioResult] = entry["hardware"]
        if hardware:
            succ = [_round(r.metrics.success_probability, 1) for r in hardware]
            hell = [_round(r.metrics.hellinger, 3) for r in hardware]
            fids = [_round(r.fidelity, 3) for r in hardware if r.fidelity is not None]
            row["hardware_success"] = _round(sum(succ) / len(succ), 1)
            row["hardware_hellinger"] = _round(sum(hell) / len(hell), 3)
            row["hardware_fidelity"] = _round(sum(fids) / len(fids), 3) if fids else None
            row["hardware_devices"] = sorted(
                {r.backend_name or "unknown" for r in hardware}
            )
        else:
            row["hardware_success"] = None
            row["hardware_hellinger"] = None
            row["hardware_fidelity"] = None
            row["hardware_devices"] = []
        rows.append(row)
    return rows


def _device_table(results: Sequence[ScenarioResult]) -> dict[str, dict[str, float]]:
    """backend_name -> {label -> rounded hardware success}."""
    table: dict[str, dict[str, float]] = {}
    for result in results:
        if result.scenario is Scenario.HARDWARE_INGESTED:
            device = result.backend_name or "unknown"
            table.setdefault(device, {})[result.pattern.label] = _round(
                result.metrics.success_probability, 1
            )
    return table


def _mean(values: list[float]) -> float | None:
    return None if not values else sum(values) / len(values)


def _assemble_aggregates(rows: list[dict], devices: dict[str, dict[str, float]]) -> dict:
    aggregates: dict = {}
    for col in ("ideal", "emulation", "hardware"):
        for metric in ("success", "hellinger", "fidelity"):
            values = [row[f"{col}_{metric}"] for row in rows if row[f"{col}_{metric}"] is not None]
            mean = _mean(values)
            if mean is not None:
                aggregates[f"mean_{metric}_{col}"] = _round(mean, 1 if metric == "success" else 3)

    gaps = [
        performance_gap(row["emulation_success"], row["hardware_success"])
        for row in rows
        if row["emulation_success"] is not None and row["hardware_success"] is not None
    ]
    if gaps:
        aggregates["mean_gap_emulation_vs_hardware"] = _round(sum(gaps) / len(gaps), 1)

    category_means: dict[str, dict[str, float]] = {}
    for col in ("ideal", "emulation", "hardware"):
        per_cat: dict[str, list[float]] = {}
        for row in rows:
            value = row[f"{col}_success"]
            if value is not None:
                per_cat.setdefault(row["category"], []).append(value)
        for category in sorted(per_cat):
            category_means.setdefault(category, {})[col] = _round(
                sum(per_cat[category]) / len(per_cat[category]), 1
            )
    if category_means:
        aggregates["category_mean_success"] = category_means

    def _safe_pearson(xs: list[float], ys: list[float], key: str) -> None:
        if len(xs) >= 2:
            try:
                aggregates[key] = _round(pearson_r(xs, ys), 3)
            except ValueError:
                pass

    gap_rows = [
        row
        for row in rows
        if row["emulation_success"] is not None and row["hardware_success"] is not None
    ]
    _safe_pearson(
        [row["complexity"] for row in gap_rows],
        [performance_gap(row["emulation_success"], row["hardware_success"]) for row in gap_rows],
        "pearson_gap_vs_complexity",
    )
    fid_rows = [row for row in rows if row["emulation_fidelity"] is not None]
    _safe_pearson(
        [row["density"] for row in fid_rows],
        [row["emulation_fidelity"] for row in fid_rows],
        "pearson_density_vs_fidelity",
    )
    _safe_pearson(
        [row["emulation_fidelity"] for row in fid_rows if row["emulation_success"] is not None],
        [row["emulation_success"] for row in fid_rows if row["emulation_success"] is not None],
        "pearson_fidelity_vs_success",
    )

    if len(devices) >= 2:
        common = sorted(set.intersection(*(set(t) for t in devices.values())))
        if len(common) >= 2:
            rankings = [
                rank_scores([devices[name][label] for label in common]) for name in sorted(devices)
            ]
            try:
                aggregates["kendalls_w_devices"] = _round(kendalls_w(rankings), 3)
                aggregates["kendalls_w_patterns"] = common
            except ValueError:
                pass
    return aggregates


def _fmt(value, digits: int) -> str:
    return "" if value is None else f"{value:.{digits}f}"


def _csv_text(rows: list[dict], aggregates: dict) -> str:
    header = (
        "label,secret,category,qubits,density,"
        "ideal_success,ideal_hellinger,emulation_success,emulation_hellinger,"
        "hardware_success,hardware_hellinger,ideal_fidelity,emulation_fidelity,hardware_fidelity"
    )
    lines = [header]
    for row in rows:
        lines.append(
            ",".join(
                [
                    row["label"],
                    row["secret"],
                    row["category"],
                    str(row["qubits"]),
                    f"{row['density']:.3f}",
                    _fmt(row["ideal_success"], 1),
                    _fmt(row["ideal_hellinger"], 3),
                    _fmt(row["emulation_success"], 1),
                    _fmt(row["emulation_hellinger"], 3),
                    _fmt(row["hardware_success"], 1),
                    _fmt(row["hardware_hellinger"], 3),
                    _fmt(row["ideal_fidelity"], 3),
                    _fmt(row["emulation_fidelity"], 3),
                    _fmt(row["hardware_fidelity"], 3),
                ]
            )
        )
    lines.append("")
    lines.append("aggregate,key,value")
    for name in sorted(aggregates):
        value = aggregates[name]
        if name == "category_mean_success":
            for category in sorted(value):
                for col in sorted(value[category]):
                    lines.append(f"category_mean_success,{category}/{col},{value[category][col]:.1f}")
        elif name == "kendalls_w_patterns":
            lines.append(f"{name},,{'|'.join(value)}")
        else:
            digits = 1 if "success" in name or "gap" in name else 3
            lines.append(f"{name},,{value:.{digits}f}")
    return "\n".join(lines) + "\n"


def generate_report(
    results: Sequence[ScenarioResult],
    fmt: "ReportFormat | str",
    out_dir: "str | Path",
) -> list[Path]:
    """Write report files for a batch of results; returns written paths.

    CSV mirrors the benchmark table and appends an aggregate block; JSON
    carries full precision plus per-device hardware detail; PLOTDATA
    emits one TSV per figure series.  Identical inputs produce byte
    identical files.
    """
    if not results:
        raise ValueError("no results to report")
    fmt = ReportFormat(fmt.upper()) if isinstance(fmt, str) else fmt
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = _assemble_rows(results)
    devices = _device_table(results)
    aggregates = _assemble_aggregates(rows, devices)
    written: list[Path] = []

    if fmt is ReportFormat.CSV:
        path = out_dir / "results.csv"
        path.write_text(_csv_text(rows, aggregates), encoding="utf-8")
        written.append(path)
    elif fmt is ReportFormat.JSON:
        path = out_dir / "results.json"
        payload = {
            "rows": rows,
            "aggregates": aggregates,
            "hardware_devices": {k: devices[k] for k in sorted(devices)},
            "results": [r.to_dict() for r in results],
        }
        path.write_text(
            json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        written.append(path)
    elif fmt is ReportFormat.PLOTDATA:
        plot_dir = out_dir / "plotdata"
        plot_dir.mkdir(parents=True, exist_ok=True)

        lines = ["category\tscenario\tmean_success"]
        csm = aggregates.get("category_mean_success", {})
        for category in sorted(csm):
            for col in sorted(csm[category]):
                lines.append(f"{category}\t{col}\t{csm[category][col]:.1f}")
        path = plot_dir / "category_means.tsv"
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        written.append(path)

        lines = ["label\tdensity\temulation_fidelity\temulation_success"]
        for row in rows:
            if row["emulation_fidelity"] is not None:
                success = _fmt(row["emulation_success"], 1)
                lines.append(
                    f"{row['label']}\t{row['density']:.3f}\t{row['emulation_fidelity']:.3f}\t{success}"
                )
        path = plot_dir / "density_vs_fidelity.tsv"
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        written.append(path)

        lines = ["label\tcomplexity\tgap_emulation_vs_hardware"]
        for row in rows:
            if row["emulation_success"] is not None and row["hardware_success"] is not None:
                gap = performance_gap(row["emulation_success"], row["hardware_success"])
                lines.append(f"{row['label']}\t{row['complexity']:.3f}\t{gap:.1f}")
        path = plot_dir / "gap_vs_complexity.tsv"
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        written.append(path)
    return written


_ALLOWED_MANIFEST_KEYS = {
    "shots",
    "seed",
    "oracle",
    "scenarios",
    "snapshot",
    "ingest_dir",
    "qst_shots",
    "jobs",
    "secrets",
    "exact_ideal",
    "idle_decay",
    "out_dir",
}


@dataclass(frozen=True)
class Manifest:
    """Suite run configuration; see :func:`load_manifest` for the JSON form."""

    shots: int = 20000
    seed: int = 0
    oracle: OracleStyle = OracleStyle.CNOT
    scenarios: tuple[Scenario, ...] = (Scenario.IDEAL,)
    snapshot_path: str | None = None
    ingest_dir: str | None = None
    qst_shots: int | None = None
    jobs: int = 1
    secrets: tuple[str, ...] | None = None
    exact_ideal: bool = True
    idle_decay: bool = False
    out_dir: str | None = None

    def patterns(self) -> tuple[TestPattern, ...]:
        if self.secrets is None:
            return builtin_suite()
        return tuple(TestPattern.make(bits) for bits in self.secrets)


def manifest_from_dict(payload: Mapping) -> Manifest:
    unknown = set(payload) - _ALLOWED_MANIFEST_KEYS
    if unknown:
        raise ValueError(f"unknown manifest keys: {sorted(unknown)}")
    scenarios = tuple(
        Scenario(str(s).upper()) for s in payload.get("scenarios", ["ideal"])
    )
    return Manifest(
        shots=int(payload.get("shots", 20000)),
        seed=int(payload.get("seed", 0)),
        oracle=OracleStyle(str(payload.get("oracle", "cnot")).upper()),
        scenarios=scenarios,
        snapshot_path=payload.get("snapshot"),
        ingest_dir=payload.get("ingest_dir"),
        qst_shots=None if payload.get("qst_shots") is None else int(payload["qst_shots"]),
        jobs=int(payload.get("jobs", 1)),
        secrets=None if payload.get("secrets") is None else tuple(payload["secrets"]),
        exact_ideal=bool(payload.get("exact_ideal", True)),
        idle_decay=bool(payload.get("idle_decay", False)),
        out_dir=payload.get("out_dir"),
    )


def load_manifest(path: "str | Path") -> Manifest:
    with open(path, "r", encoding="utf-8") as fh:
        return manifest_from_dict(json.load(fh))


def run_suite(manifest: Manifest, out_dir: "str | Path") -> tuple[list[ScenarioResult], list[Path]]:
    """Run the full benchmark per the manifest and write all report formats.

    Simulation jobs get per-job seeds derived from (master seed, pattern
    index, scenario), so results are identical for any ``jobs`` setting.
    """
    from .noise import load_snapshot  # local import to avoid cycle in docs tooling

    out_dir = Path(out_dir)
    patterns = manifest.patterns()
    snapshot = None
    if Scenario.NOISY in manifest.scenarios:
        if manifest.snapshot_path is None:
            raise ValueError("manifest requests the NOISY scenario but names no snapshot")
        snapshot = load_snapshot(manifest.snapshot_path)

    jobs: list[tuple[int, TestPattern, Scenario]] = []
    for scenario in manifest.scenarios:
        if scenario is Scenario.HARDWARE_INGESTED:
            continue
        for idx, pattern in enumerate(patterns):
            jobs.append((idx, pattern, scenario))

    scenario_ordinal = {Scenario.IDEAL: 0, Scenario.NOISY: 1}

    def _run(job: tuple[int, TestPattern, Scenario]) -> ScenarioResult:
        idx, pattern, scenario = job
        return run_scenario(
            pattern,
            scenario,
            snapshot=snapshot,
            shots=manifest.shots,
            seed=spawn_seed(manifest.seed, idx, scenario_ordinal[scenario]),
            oracle_style=manifest.oracle,
            exact_ideal=manifest.exact_ideal,
            qst_shots=manifest.qst_shots,
            idle_decay=manifest.idle_decay,
        )

    if manifest.jobs > 1:
        with ThreadPoolExecutor(max_workers=manifest.jobs) as pool:
            results = list(pool.map(_run, jobs))
    else:
        results = [_run(job) for job in jobs]

    if manifest.ingest_dir is not None:
        for path in sorted(Path(manifest.ingest_dir).glob("*.json")):
            results.append(ingest_hardware_counts(path))

    written: list[Path] = []
    for fmt in (ReportFormat.CSV, ReportFormat.JSON, ReportFormat.PLOTDATA):
        written.extend(generate_report(results, fmt, out_dir))

    qst_dir = out_dir / "qst"
    for result in results:
        if result.tomography is not None:
            qst_dir.mkdir(parents=True, exist_ok=True)
            name = f"{result.pattern.label}_{_SCENARIO_COLUMN[result.scenario]}.json"
            path = qst_dir / name
            path.write_text(
                json.dumps(result.tomography.to_dict(), sort_keys=True) + "\n",
                encoding="utf-8",
            )
            written.append(path)
    return results, written
