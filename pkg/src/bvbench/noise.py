"""Calibration snapshots and the noise channels built from them.

A :class:`CalibrationSnapshot` is a timestamped export of per-qubit
physics (T1, T2, readout assignment errors) and per-gate error rates and
durations.  :func:`build_noise_model` turns one into executable noise:
a depolarizing channel per calibrated gate, thermal relaxation on the
qubits a gate touches for the gate's duration, and a 2x2 readout
confusion matrix per qubit applied to the final measured distribution.

Relaxation assumes zero temperature (no excited-state repopulation), so
the long-duration fixed point of the channel is |0><0|.  Snapshots with
t2 > 2*t1 are rejected outright rather than clamped: such data is
unphysical and almost always indicates a corrupt export.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Mapping

import numpy as np

from .circuits import Gate, GateKind, TWO_QUBIT_KINDS
from .linalg import KrausChannel


class CalibrationError(ValueError):
    """Raised for unphysical or missing calibration data."""


_PAULI_1Q = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def _check_probability(value: float, name: str) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise CalibrationError(f"{name} must be in [0, 1], got {value}")
    return value


@dataclass(frozen=True)
class QubitCalibration:
    """Physical parameters of one qubit.  Times in seconds, frequencies in Hz."""

    t1: float
    t2: float
    readout_error: float = 0.0
    prob_meas0_prep1: float = 0.0
    prob_meas1_prep0: float = 0.0
    readout_length: float = 0.0
    frequency: float = 0.0
    anharmonicity: float = 0.0

    def __post_init__(self):
        if self.t1 <= 0.0:
            raise CalibrationError(f"t1 must be positive, got {self.t1}")
        if self.t2 <= 0.0:
            raise CalibrationError(f"t2 must be positive, got {self.t2}")
        if self.t2 > 2.0 * self.t1 + 1e-15:
            raise CalibrationError(
                f"t2 = {self.t2} exceeds 2*t1 = {2 * self.t1}: unphysical calibration data"
            )
        _check_probability(self.readout_error, "readout_error")
        _check_probability(self.prob_meas0_prep1, "prob_meas0_prep1")
        _check_probability(self.prob_meas1_prep0, "prob_meas1_prep0")
        if self.readout_length < 0.0:
            raise CalibrationError("readout_length must be >= 0")


@dataclass(frozen=True)
class GateCalibration:
    """Error rate and duration of one calibrated gate on specific qubits."""

    kind: GateKind
    qubits: tuple[int, ...]
    error_rate: float = 0.0
    duration: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        expected = 2 if self.kind in TWO_QUBIT_KINDS else 1
        if len(self.qubits) != expected:
            raise CalibrationError(
                f"{self.kind.value} calibration takes {expected} qubit(s), got {self.qubits}"
            )
        if not 0.0 <= self.error_rate < 1.0:
            raise CalibrationError(f"error_rate must be in [0, 1), got {self.error_rate}")
        if self.duration < 0.0:
            raise CalibrationError("duration must be >= 0")


@dataclass(frozen=True)
class CalibrationSnapshot:
    """Per-qubit and per-gate calibration export for one backend at one time."""

    backend_name: str
    timestamp: str
    qubits: tuple[QubitCalibration, ...]
    gates: tuple[GateCalibration, ...]

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(self.qubits))
        object.__setattr__(self, "gates", tuple(self.gates))
        for gate in self.gates:
            for q in gate.qubits:
                if not 0 <= q < len(self.qubits):
                    raise CalibrationError(
                        f"gate {gate.kind.value} references qubit {q}, "
                        f"but snapshot has {len(self.qubits)} qubits"
                    )

    @property
    def num_qubits(self) -> int:
        return len(self.qubits)


def snapshot_from_dict(payload: Mapping) -> CalibrationSnapshot:
    """Parse the snapshot JSON schema.  Units are embedded in field names
    (t1_us, duration_ns, frequency_ghz) and converted to SI here."""
    try:
        qubits = tuple(
            QubitCalibration(
                t1=float(q["t1_us"]) * 1e-6,
                t2=float(q["t2_us"]) * 1e-6,
                readout_error=float(q.get("readout_error", 0.0)),
                prob_meas0_prep1=float(q.get("prob_meas0_prep1", 0.0)),
                prob_meas1_prep0=float(q.get("prob_meas1_prep0", 0.0)),
                readout_length=float(q.get("readout_length_ns", 0.0)) * 1e-9,
                frequency=float(q.get("frequency_ghz", 0.0)) * 1e9,
                anharmonicity=float(q.get("anharmonicity_ghz", 0.0)) * 1e9,
            )
            for q in payload["qubits"]
        )
        gates = tuple(
            GateCalibration(
                kind=GateKind(str(g["kind"]).upper()),
                qubits=tuple(g["qubits"]),
                error_rate=float(g.get("error", 0.0)),
                duration=float(g.get("duration_ns", 0.0)) * 1e-9,
            )
            for g in payload.get("gates", ())
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, CalibrationError):
            raise
        raise CalibrationError(f"malformed snapshot payload: {exc}") from exc
    return CalibrationSnapshot(
        backend_name=str(payload.get("backend_name", "unknown")),
        timestamp=str(payload.get("timestamp", "")),
        qubits=qubits,
        gates=gates,
    )


def snapshot_to_dict(snap: CalibrationSnapshot) -> dict:
    return {
        "backend_name": snap.backend_name,
        "timestamp": snap.timestamp,
        "qubits": [
            {
                "t1_us": q.t1 * 1e6,
                "t2_us": q.t2 * 1e6,
                "readout_error": q.readout_error,
                "prob_meas0_prep1": q.prob_meas0_prep1,
                "prob_meas1_prep0": q.prob_meas1_prep0,
                "readout_length_ns": q.readout_length * 1e9,
                "frequency_ghz": q.frequency * 1e-9,
                "anharmonicity_ghz": q.anharmonicity * 1e-9,
            }
            for q in snap.qubits
        ],
        "gates": [
            {
                "kind": g.kind.value.lower(),
                "qubits": list(g.qubits),
                "error": g.error_rate,
                "duration_ns": g.duration * 1e9,
            }
            for g in snap.gates
        ],
    }


def load_snapshot(path: "str | Path") -> CalibrationSnapshot:
    with open(path, "r", encoding="utf-8") as fh:
        return snapshot_from_dict(json.load(fh))


def save_snapshot(snap: CalibrationSnapshot, path: "str | Path") -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(snapshot_to_dict(snap), fh, indent=2, sort_keys=True)
        fh.write("\n")


_SINGLE_QUBIT_KINDS = (GateKind.H, GateKind.X, GateKind.S, GateKind.SX, GateKind.RZ, GateKind.ID)


def uniform_snapshot(
    num_qubits: int,
    *,
    t1: float = 250e-6,
    t2: float = 150e-6,
    error_1q: float = 3e-4,
    error_2q: float = 8e-3,
    readout_error: float = 0.03,
    duration_1q: float = 60e-9,
    duration_2q: float = 533e-9,
    readout_length: float = 1.4e-6,
    backend_name: str = "uniform",
    timestamp: str = "1970-01-01T00:00:00Z",
) -> CalibrationSnapshot:
    """Snapshot with identical parameters on every qubit and every gate.

    Covers all single-qubit kinds on each qubit and CNOT/ECR on every
    ordered pair.  RZ is virtual (zero error, zero duration).  Readout
    assignment errors are symmetric.  Default durations are placeholders
    typical of current superconducting devices; override from a real
    export when available.
    """
    qubits = tuple(
        QubitCalibration(
            t1=t1,
            t2=t2,
            readout_error=readout_error,
            prob_meas0_prep1=readout_error,
            prob_meas1_prep0=readout_error,
            readout_length=readout_length,
        )
        for _ in range(num_qubits)
    )
    gates: list[GateCalibration] = []
    for q in range(num_qubits):
        for kind in _SINGLE_QUBIT_KINDS:
            if kind is GateKind.RZ:
                gates.append(GateCalibration(kind, (q,), 0.0, 0.0))
            else:
                gates.append(GateCalibration(kind, (q,), error_1q, duration_1q))
    for a in range(num_qubits):
        for b in range(num_qubits):
            if a == b:
                continue
            gates.append(GateCalibration(GateKind.CNOT, (a, b), error_2q, duration_2q))
            gates.append(GateCalibration(GateKind.ECR, (a, b), error_2q, duration_2q))
    return CalibrationSnapshot(backend_name, timestamp, qubits, tuple(gates))


def zero_error_snapshot(num_qubits: int, backend_name: str = "noiseless") -> CalibrationSnapshot:
    """Snapshot under which noisy execution reproduces the ideal simulator."""
    return uniform_snapshot(
        num_qubits,
        error_1q=0.0,
        error_2q=0.0,
        readout_error=0.0,
        duration_1q=0.0,
        duration_2q=0.0,
        readout_length=0.0,
        backend_name=backend_name,
    )


def thermal_relaxation_channel(t1: float, t2: float, duration: float) -> KrausChannel:
    """Amplitude damping plus pure dephasing for an idle window of ``duration``.

    The damping probability is 1 - exp(-duration/t1); the extra dephasing
    is sized so the total off-diagonal decay equals exp(-duration/t2),
    which requires the pure-dephasing rate 1/t2 - 1/(2*t1) to be >= 0.
    """
    if t1 <= 0.0 or t2 <= 0.0:
        raise CalibrationError("t1 and t2 must be positive")
    if duration < 0.0:
        raise CalibrationError("duration must be >= 0")
    if t2 > 2.0 * t1 + 1e-15:
        raise CalibrationError(f"t2 = {t2} exceeds 2*t1 = {2 * t1}: unphysical calibration data")
    if duration == 0.0:
        return KrausChannel.identity(1)
    p_amp = 1.0 - math.exp(-duration / t1)
    inv_tphi = max(1.0 / t2 - 0.5 / t1, 0.0)
    p_z = 0.5 * (1.0 - math.exp(-duration * inv_tphi))

    damp = [
        np.array([[1, 0], [0, math.sqrt(1.0 - p_amp)]], dtype=np.complex128),
        np.array([[0, math.sqrt(p_amp)], [0, 0]], dtype=np.complex128),
    ]
    phase = [
        math.sqrt(1.0 - p_z) * _PAULI_1Q["I"],
        math.sqrt(p_z) * _PAULI_1Q["Z"],
    ]
    ops = [p @ d for p in phase for d in damp]
    ops = [op for op in ops if np.abs(op).max() > 1e-12]
    return KrausChannel(tuple(ops))


def depolarizing_channel(error_rate: float, num_qubits: int) -> KrausChannel:
    """Uniform Pauli channel whose average gate infidelity equals ``error_rate``.

    The channel rho -> (1-lam)*rho + lam*I/d has average fidelity
    1 - lam*(d-1)/d, so lam = error_rate*d/(d-1).  Complete positivity
    bounds error_rate by d/(d+1) (2/3 for one qubit, 4/5 for two).
    """
    if num_qubits not in (1, 2):
        raise CalibrationError("depolarizing channel supports 1 or 2 qubits")
    if not 0.0 <= error_rate <= 1.0:
        raise CalibrationError(f"error_rate must be in [0, 1], got {error_rate}")
    dim = 2**num_qubits
    lam = error_rate * dim / (dim - 1)
    if lam > dim**2 / (dim**2 - 1) + 1e-12:
        raise CalibrationError(
            f"error_rate {error_rate} exceeds the CP bound {dim / (dim + 1)} for {num_qubits} qubit(s)"
        )
    if lam == 0.0:
        return KrausChannel.identity(num_qubits)
    p_pauli = lam / dim**2
    p_id = 1.0 - lam + p_pauli
    labels = ["I", "X", "Y", "Z"]
    ops = []
    if num_qubits == 1:
        paulis = [(lbl, _PAULI_1Q[lbl]) for lbl in labels]
    else:
        paulis = [
            (a + b, np.kron(_PAULI_1Q[a], _PAULI_1Q[b])) for a in labels for b in labels
        ]
    for label, mat in paulis:
        weight = p_id if set(label) == {"I"} else p_pauli
        if weight > 0.0:
            ops.append(math.sqrt(weight) * mat)
    return KrausChannel(tuple(ops))


def readout_confusion(q: QubitCalibration) -> np.ndarray:
    """Column-stochastic assignment matrix M[measured][prepared].

    M[0][1] = P(0|1) and M[1][0] = P(1|0), so asymmetric readout is
    represented faithfully.
    """
    p01 = q.prob_meas0_prep1
    p10 = q.prob_meas1_prep0
    mat = np.array([[1.0 - p10, p01], [p10, 1.0 - p01]], dtype=np.float64)
    mat.setflags(write=False)
    return mat


@lru_cache(maxsize=4096)
def _cached_relaxation(t1: float, t2: float, duration: float) -> KrausChannel:
    return thermal_relaxation_channel(t1, t2, duration)


@dataclass(frozen=True, eq=False)
class NoiseModel:
    """Executable noise: per-gate channels plus per-qubit readout confusion.

    Channel order per gate application is ideal unitary, then the gate's
    depolarizing channel, then thermal relaxation for the gate duration on
    the qubits the gate touches.  With ``idle_decay`` set, spectator
    qubits also relax for that duration.
    """

    num_qubits: int
    gate_channels: Mapping[tuple[GateKind, tuple[int, ...]], tuple[KrausChannel, ...]]
    gate_durations: Mapping[tuple[GateKind, tuple[int, ...]], float]
    relaxation_params: Mapping[int, tuple[float, float]]
    confusion_matrices: Mapping[int, np.ndarray]
    idle_decay: bool = False

    def _key(self, gate: Gate) -> tuple[GateKind, tuple[int, ...]]:
        return (gate.kind, gate.targets)

    def channels_for(self, gate: Gate) -> tuple[KrausChannel, ...]:
        key = self._key(gate)
        if key not in self.gate_channels:
            raise CalibrationError(
                f"no calibration for gate {gate.kind.value} on qubits {gate.targets}"
            )
        return self.gate_channels[key]

    def duration_for(self, gate: Gate) -> float:
        if gate.duration is not None:
            return gate.duration
        key = self._key(gate)
        if key not in self.gate_durations:
            raise CalibrationError(
                f"no calibration for gate {gate.kind.value} on qubits {gate.targets}"
            )
        return self.gate_durations[key]

    def relaxation_channel(self, qubit: int, duration: float) -> KrausChannel:
        if qubit not in self.relaxation_params:
            raise CalibrationError(f"no relaxation parameters for qubit {qubit}")
        t1, t2 = self.relaxation_params[qubit]
        return _cached_relaxation(t1, t2, duration)

    def confusion_for(self, qubit: int) -> np.ndarray:
        if qubit not in self.confusion_matrices:
            raise CalibrationError(f"no readout calibration for qubit {qubit}")
        return self.confusion_matrices[qubit]


def build_noise_model(snap: CalibrationSnapshot, idle_decay: bool = False) -> NoiseModel:
    """Compile a calibration snapshot into an executable noise model."""
    channels: dict[tuple[GateKind, tuple[int, ...]], tuple[KrausChannel, ...]] = {}
    durations: dict[tuple[GateKind, tuple[int, ...]], float] = {}
    for gate in snap.gates:
        key = (gate.kind, gate.qubits)
        chans: tuple[KrausChannel, ...] = ()
        if gate.error_rate > 0.0:
            chans = (depolarizing_channel(gate.error_rate, len(gate.qubits)),)
        channels[key] = chans
        durations[key] = gate.duration
    relaxation = {q: (cal.t1, cal.t2) for q, cal in enumerate(snap.qubits)}
    confusion = {q: readout_confusion(cal) for q, cal in enumerate(snap.qubits)}
    return NoiseModel(
        num_qubits=snap.num_qubits,
        gate_channels=channels,
        gate_durations=durations,
        relaxation_params=relaxation,
        confusion_matrices=confusion,
        idle_decay=idle_decay,
    )
