"""Hidden-string (Bernstein-Vazirani) benchmarking toolkit.

Simulates the algorithm exactly, emulates it under calibration-derived
noise models, reconstructs output states with tomography, and reports
pattern-dependent performance metrics across ideal, emulated, and
ingested-hardware scenarios.
"""

from .circuits import (
    Circuit,
    Gate,
    GateKind,
    OracleStyle,
    SecretString,
    build_bv_circuit,
    build_oracle_circuit,
    circuit_unitary,
    ecr_matrix,
    gate_matrix,
    oracle_unitary,
)
from .harness import (
    IngestError,
    Manifest,
    PatternCategory,
    ReportFormat,
    Scenario,
    ScenarioResult,
    TestPattern,
    ValidationReport,
    builtin_suite,
    category_matches,
    classify_secret,
    generate_report,
    ingest_hardware_counts,
    load_manifest,
    run_scenario,
    run_suite,
    run_validation,
)
from .linalg import (
    DensityMatrix,
    KrausChannel,
    StateVector,
    Unitary,
    apply_channel,
    apply_unitary,
    apply_unitary_to_density,
    kron,
    partial_trace,
)
from .metrics import (
    MetricReport,
    compute_metrics,
    hamming_error_profile,
    hellinger_distance,
    kendalls_w,
    kendalls_w_pvalue,
    pearson_r,
    performance_gap,
    rank_scores,
    success_probability,
)
from .noise import (
    CalibrationError,
    CalibrationSnapshot,
    GateCalibration,
    NoiseModel,
    QubitCalibration,
    build_noise_model,
    depolarizing_channel,
    load_snapshot,
    readout_confusion,
    save_snapshot,
    snapshot_from_dict,
    snapshot_to_dict,
    thermal_relaxation_channel,
    uniform_snapshot,
    zero_error_snapshot,
)
from .simulator import (
    CountsDistribution,
    ExecutionConfig,
    ExecutionMode,
    RegisterTooLargeError,
    exact_distribution,
    final_density_matrix,
    noisy_distribution,
    run_ideal,
    run_noisy,
)
from .tomography import (
    MeasurementSetting,
    TomographyResult,
    generate_settings,
    linear_inversion,
    measure_in_basis,
    pauli_expectations,
    project_to_physical,
    run_qst,
    setting_distribution,
    state_fidelity,
)

__version__ = "0.1.0"
