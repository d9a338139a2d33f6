"""Circuit execution: ideal statevector and noisy density-matrix paths.

Both paths end in a single seeded multinomial draw over the exact final
distribution of the data register, which makes sampled counts exact with
respect to the underlying state semantics and reproducible bit-for-bit
from the seed.  The noisy path evolves the full-register density matrix,
interleaving each gate's unitary with its depolarizing channel and with
thermal relaxation for the gate's duration, then pushes the reduced
diagonal through the per-qubit readout confusion matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Mapping

import numpy as np

from .circuits import Circuit, GateKind, gate_matrix
from .linalg import (
    DensityMatrix,
    KrausChannel,
    StateVector,
    Unitary,
    apply_unitary,
    partial_trace,
)
from .noise import NoiseModel
from .seeding import rng_from


class RegisterTooLargeError(ValueError):
    """Raised when a register exceeds the supported simulation size."""


MAX_STATEVECTOR_QUBITS = 16


class ExecutionMode(str, Enum):
    IDEAL_STATEVECTOR = "IDEAL_STATEVECTOR"
    NOISY_DENSITY = "NOISY_DENSITY"


@dataclass(frozen=True)
class ExecutionConfig:
    shots: int
    seed: int
    mode: ExecutionMode = ExecutionMode.IDEAL_STATEVECTOR

    def __post_init__(self):
        if self.shots < 1:
            raise ValueError(f"shots must be >= 1, got {self.shots}")


@dataclass(frozen=True, eq=False)
class CountsDistribution:
    """Measurement outcome histogram over fixed-width bitstrings."""

    n_bits: int
    counts: Mapping[str, int]

    def __post_init__(self):
        counts = dict(self.counts)
        for key, value in counts.items():
            if len(key) != self.n_bits or set(key) - {"0", "1"}:
                raise ValueError(f"counts key {key!r} is not a {self.n_bits}-bit string")
            if int(value) != value or value < 0:
                raise ValueError(f"count for {key!r} must be a non-negative integer")
            counts[key] = int(value)
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def probabilities(self) -> dict[str, float]:
        total = self.total
        if total == 0:
            return {}
        return {key: value / total for key, value in self.counts.items()}

    def most_frequent(self) -> str:
        """Most frequent outcome; ties broken by lexicographically smallest key."""
        if not self.counts:
            raise ValueError("empty counts")
        return min(self.counts, key=lambda k: (-self.counts[k], k))

    def to_dict(self) -> dict:
        return {
            "n_bits": self.n_bits,
            "shots": self.total,
            "counts": {k: self.counts[k] for k in sorted(self.counts)},
        }

    @classmethod
    def from_dict(cls, payload: Mapping) -> "CountsDistribution":
        dist = cls(n_bits=int(payload["n_bits"]), counts=dict(payload["counts"]))
        declared = int(payload["shots"])
        if dist.total != declared:
            raise ValueError(f"counts sum to {dist.total} but shots field declares {declared}")
        return dist


def _final_statevector(circuit: Circuit) -> StateVector:
    if circuit.num_qubits > MAX_STATEVECTOR_QUBITS:
        raise RegisterTooLargeError(
            f"statevector simulation limited to {MAX_STATEVECTOR_QUBITS} qubits, "
            f"got {circuit.num_qubits}"
        )
    state = StateVector.zero(circuit.num_qubits)
    for gate in circuit.gates:
        if gate.kind is GateKind.MEASURE:
            continue
        state = apply_unitary(state, Unitary(gate_matrix(gate.kind, gate.param)), gate.targets)
    if circuit.global_phase != 0.0:
        state = StateVector(state.amplitudes * np.exp(1j * circuit.global_phase))
    return state


def _marginal_data_probs(full_probs: np.ndarray, circuit: Circuit) -> np.ndarray:
    """Marginalize full-register probabilities onto the data register."""
    if not circuit.has_ancilla:
        return full_probs
    m = circuit.num_qubits
    tensor = full_probs.reshape((2,) * m)
    return tensor.sum(axis=tuple(range(circuit.num_data_qubits, m))).reshape(-1)


def _probs_to_dict(probs: np.ndarray, n_bits: int, cutoff: float = 1e-15) -> dict[str, float]:
    return {
        format(i, f"0{n_bits}b"): float(p)
        for i, p in enumerate(probs)
        if p > cutoff
    }


def _sample_counts(probs: np.ndarray, n_bits: int, shots: int, seed: int) -> CountsDistribution:
    p = np.clip(np.asarray(probs, dtype=np.float64), 0.0, None)
    p /= p.sum()
    draw = rng_from(seed).multinomial(shots, p)
    counts = {format(i, f"0{n_bits}b"): int(c) for i, c in enumerate(draw) if c}
    return CountsDistribution(n_bits=n_bits, counts=counts)


def exact_distribution(circuit: Circuit) -> dict[str, float]:
    """Noise-free outcome probabilities of the data register.

    Keys are data-register bitstrings (qubit 0 leftmost); entries that are
    exactly zero are omitted.  Probabilities sum to 1 within 1e-10.
    """
    state = _final_statevector(circuit)
    probs = _marginal_data_probs(state.probabilities(), circuit)
    return _probs_to_dict(probs, circuit.num_data_qubits)


def run_ideal(circuit: Circuit, cfg: ExecutionConfig) -> CountsDistribution:
    """Sample data-register outcomes from the ideal statevector."""
    if cfg.mode is not ExecutionMode.IDEAL_STATEVECTOR:
        raise ValueError(f"run_ideal requires IDEAL_STATEVECTOR mode, got {cfg.mode}")
    state = _final_statevector(circuit)
    probs = _marginal_data_probs(state.probabilities(), circuit)
    return _sample_counts(probs, circuit.num_data_qubits, cfg.shots, cfg.seed)


def _unitary_superop(mat: np.ndarray) -> np.ndarray:
    return np.kron(mat, mat.conj())


@lru_cache(maxsize=4096)
def _channel_superop(channel: KrausChannel) -> np.ndarray:
    """Matrix of rho -> sum_K K rho K† acting on the doubled (row, col) index."""
    return sum(np.kron(K, K.conj()) for K in channel.operators)


def _apply_superop(tensor: np.ndarray, sop: np.ndarray, targets, m: int) -> np.ndarray:
    """Contract a d^2 x d^2 superoperator into the paired row/col target axes.

    One tensordot per gate instead of two per Kraus operator, which is what
    keeps 11-qubit density evolution tractable.
    """
    k = len(targets)
    axes = list(targets) + [m + t for t in targets]
    op = sop.reshape((2,) * (4 * k))
    moved = np.tensordot(op, tensor, axes=(list(range(2 * k, 4 * k)), axes))
    return np.moveaxis(moved, list(range(2 * k)), axes)


def _evolve_density(circuit: Circuit, model: NoiseModel) -> DensityMatrix:
    """Full-register density evolution; the result is validated once at the end.

    Per gate, the ideal unitary, its depolarizing channel, and (for
    single-qubit gates) its relaxation window are fused into a single
    superoperator, cached per (kind, param, targets).
    """
    if model.num_qubits < circuit.num_qubits:
        raise ValueError(
            f"noise model covers {model.num_qubits} qubits but circuit uses {circuit.num_qubits}"
        )
    m = circuit.num_qubits
    dim = 2**m
    rho = np.zeros((dim, dim), dtype=np.complex128)
    rho[0, 0] = 1.0
    tensor = rho.reshape((2,) * (2 * m))
    all_qubits = range(m)
    fused: dict[tuple, tuple[np.ndarray, tuple[tuple[int, np.ndarray], ...]]] = {}
    for gate in circuit.gates:
        if gate.kind is GateKind.MEASURE:
            continue
        key = (gate.kind, gate.param, gate.targets, gate.duration)
        if key not in fused:
            sop = _unitary_superop(gate_matrix(gate.kind, gate.param))
            for channel in model.channels_for(gate):
                sop = _channel_superop(channel) @ sop
            duration = model.duration_for(gate)
            trailing: list[tuple[int, np.ndarray]] = []
            if duration > 0.0:
                for q in gate.targets:
                    relax = _channel_superop(model.relaxation_channel(q, duration))
                    if len(gate.targets) == 1:
                        sop = relax @ sop
                    else:
                        trailing.append((q, relax))
                if model.idle_decay:
                    for q in all_qubits:
                        if q not in gate.targets:
                            trailing.append(
                                (q, _channel_superop(model.relaxation_channel(q, duration)))
                            )
            fused[key] = (sop, tuple(trailing))
        sop, trailing = fused[key]
        tensor = _apply_superop(tensor, sop, gate.targets, m)
        for q, relax in trailing:
            tensor = _apply_superop(tensor, relax, [q], m)
    return DensityMatrix(tensor.reshape(dim, dim))


def _apply_confusion(probs: np.ndarray, model: NoiseModel, n_bits: int) -> np.ndarray:
    tensor = probs.reshape((2,) * n_bits)
    for q in range(n_bits):
        mat = model.confusion_for(q)
        tensor = np.moveaxis(np.tensordot(mat, tensor, axes=(1, q)), 0, q)
    return tensor.reshape(-1)


def noisy_distribution(circuit: Circuit, model: NoiseModel) -> dict[str, float]:
    """Exact outcome probabilities of the data register under a noise model,
    including readout confusion.  The sampled :func:`run_noisy` draws from
    exactly this distribution."""
    probs = _noisy_probs(circuit, model)
    return _probs_to_dict(probs, circuit.num_data_qubits)


def _noisy_probs(circuit: Circuit, model: NoiseModel) -> np.ndarray:
    rho = _evolve_density(circuit, model)
    reduced = partial_trace(rho, circuit.data_qubits)
    probs = reduced.diagonal_probabilities()
    return _apply_confusion(probs, model, circuit.num_data_qubits)


def run_noisy(circuit: Circuit, model: NoiseModel, cfg: ExecutionConfig) -> CountsDistribution:
    """Sample data-register outcomes from the noisy density-matrix evolution."""
    if cfg.mode is not ExecutionMode.NOISY_DENSITY:
        raise ValueError(f"run_noisy requires NOISY_DENSITY mode, got {cfg.mode}")
    probs = _noisy_probs(circuit, model)
    return _sample_counts(probs, circuit.num_data_qubits, cfg.shots, cfg.seed)


def final_density_matrix(circuit: Circuit, model: NoiseModel | None = None) -> DensityMatrix:
    """State of the data register after the circuit, ancilla traced out.

    Measurement gates are ignored.  Without a model this uses the pure
    statevector path; with one (even an all-zero model) it uses the full
    density-matrix path.
    """
    if model is None:
        rho = DensityMatrix.from_statevector(_final_statevector(circuit))
    else:
        rho = _evolve_density(circuit, model)
    return partial_trace(rho, circuit.data_qubits)
