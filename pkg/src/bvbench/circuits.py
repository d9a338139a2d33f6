"""Gate set, circuit representation, and Bernstein-Vazirani circuit builders.

The gate set mirrors the native basis of current IBM superconducting
processors (ECR, RZ, SX, ID, X) plus the textbook H, S, CNOT and a
terminal MEASURE marker.  Circuits are immutable values.

The hidden-string oracle comes in two flavours: the canonical CNOT form
(one CNOT from data qubit i to the ancilla wherever the secret bit is 1)
and a hardware-native ECR form in which every CNOT is rewritten as

    X(control) -> ECR(control, target) -> S(control), SX(target)

with a global phase of 7*pi/4 per rewritten CNOT.  The two oracle
unitaries agree up to that global phase, which the circuit records so the
full unitaries match exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .linalg import Unitary, _apply_matrix


class GateKind(str, Enum):
    H = "H"
    X = "X"
    S = "S"
    SX = "SX"
    RZ = "RZ"
    ID = "ID"
    CNOT = "CNOT"
    ECR = "ECR"
    MEASURE = "MEASURE"


class OracleStyle(str, Enum):
    CNOT = "CNOT"
    ECR = "ECR"


TWO_QUBIT_KINDS = frozenset({GateKind.CNOT, GateKind.ECR})

_SQ = 1.0 / math.sqrt(2.0)
_H = np.array([[_SQ, _SQ], [_SQ, -_SQ]], dtype=np.complex128)
_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_S = np.array([[1, 0], [0, 1j]], dtype=np.complex128)
_SXM = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=np.complex128)
_I = np.eye(2, dtype=np.complex128)
_CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128
)
_SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=np.complex128
)

# Echoed cross-resonance, (1/sqrt(2))*(IX - XY).  As printed, the index of
# the second qubit (the SX/target side) is the most significant bit; the
# big-endian applied form below conjugates with SWAP so that targets[0]
# (the S/control side) takes the most significant position, consistent
# with every other two-qubit gate in this package.
_ECR_PRINTED = _SQ * np.array(
    [[0, 1, 0, 1j], [1, 0, -1j, 0], [0, 1j, 0, 1], [-1j, 0, 1, 0]],
    dtype=np.complex128,
)
_ECR_APPLIED = _SWAP @ _ECR_PRINTED @ _SWAP

ECR_GLOBAL_PHASE = 7.0 * math.pi / 4.0


def ecr_matrix() -> Unitary:
    """The 4x4 echoed cross-resonance matrix, exactly as conventionally printed."""
    return Unitary(_ECR_PRINTED)


def gate_matrix(kind: GateKind, param: float | None = None) -> np.ndarray:
    """Matrix of a gate kind in the big-endian application convention."""
    if kind is GateKind.RZ:
        if param is None:
            raise ValueError("RZ requires a rotation angle")
        return np.array(
            [[np.exp(-0.5j * param), 0], [0, np.exp(0.5j * param)]], dtype=np.complex128
        )
    table = {
        GateKind.H: _H,
        GateKind.X: _X,
        GateKind.S: _S,
        GateKind.SX: _SXM,
        GateKind.ID: _I,
        GateKind.CNOT: _CNOT,
        GateKind.ECR: _ECR_APPLIED,
    }
    if kind not in table:
        raise ValueError(f"gate kind {kind} has no matrix")
    return table[kind]


@dataclass(frozen=True)
class Gate:
    """One gate application: kind, target qubits, optional angle and duration."""

    kind: GateKind
    targets: tuple[int, ...]
    param: float | None = None
    duration: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        expected = 2 if self.kind in TWO_QUBIT_KINDS else 1
        if len(self.targets) != expected:
            raise ValueError(f"{self.kind.value} takes {expected} target(s), got {self.targets}")
        if len(set(self.targets)) != len(self.targets):
            raise ValueError(f"{self.kind.value} targets must be distinct: {self.targets}")
        if self.kind is GateKind.RZ and self.param is None:
            raise ValueError("RZ gate requires an angle parameter")


@dataclass(frozen=True)
class SecretString:
    """Hidden bitstring recovered by the Bernstein-Vazirani algorithm."""

    bits: str

    def __post_init__(self):
        if not self.bits:
            raise ValueError("secret string must not be empty")
        if set(self.bits) - {"0", "1"}:
            raise ValueError(f"secret string must be over {{0,1}}: {self.bits!r}")

    def __len__(self) -> int:
        return len(self.bits)

    @property
    def hamming_weight(self) -> int:
        return self.bits.count("1")

    @property
    def density(self) -> float:
        return self.hamming_weight / len(self.bits)


def _coerce_secret(s: "SecretString | str") -> SecretString:
    return s if isinstance(s, SecretString) else SecretString(str(s))


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list on ``num_data_qubits`` data qubits plus an optional ancilla.

    The ancilla, when present, is the last qubit (index ``num_data_qubits``).
    MEASURE gates may only appear at the end of the list.
    """

    num_data_qubits: int
    has_ancilla: bool
    gates: tuple[Gate, ...]
    global_phase: float = 0.0

    def __post_init__(self):
        if self.num_data_qubits < 1:
            raise ValueError("circuit needs at least one data qubit")
        object.__setattr__(self, "gates", tuple(self.gates))
        seen_measure = False
        for gate in self.gates:
            for t in gate.targets:
                if not 0 <= t < self.num_qubits:
                    raise ValueError(f"gate target {t} out of range for {self.num_qubits} qubits")
            if gate.kind is GateKind.MEASURE:
                seen_measure = True
            elif seen_measure:
                raise ValueError("measurement gates must come after all other gates")

    @property
    def num_qubits(self) -> int:
        return self.num_data_qubits + (1 if self.has_ancilla else 0)

    @property
    def data_qubits(self) -> tuple[int, ...]:
        return tuple(range(self.num_data_qubits))

    def to_json(self) -> str:
        """Canonical JSON form, stable across runs for reproducibility artifacts."""
        payload = {
            "n": self.num_data_qubits,
            "ancilla": self.has_ancilla,
            "global_phase": self.global_phase,
            "gates": [
                {
                    "kind": g.kind.value,
                    "targets": list(g.targets),
                    **({"param": g.param} if g.param is not None else {}),
                    **({"duration": g.duration} if g.duration is not None else {}),
                }
                for g in self.gates
            ],
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "Circuit":
        payload = json.loads(text)
        gates = tuple(
            Gate(
                GateKind(g["kind"]),
                tuple(g["targets"]),
                param=g.get("param"),
                duration=g.get("duration"),
            )
            for g in payload["gates"]
        )
        return cls(
            num_data_qubits=int(payload["n"]),
            has_ancilla=bool(payload["ancilla"]),
            gates=gates,
            global_phase=float(payload.get("global_phase", 0.0)),
        )


def _oracle_gates(secret: SecretString, style: OracleStyle, ancilla: int) -> tuple[list[Gate], float]:
    """Oracle gate list plus accumulated global phase, ascending data-qubit order."""
    gates: list[Gate] = []
    phase = 0.0
    for i, bit in enumerate(secret.bits):
        if bit != "1":
            continue
        if style is OracleStyle.CNOT:
            gates.append(Gate(GateKind.CNOT, (i, ancilla)))
        else:
            gates.append(Gate(GateKind.X, (i,)))
            gates.append(Gate(GateKind.ECR, (i, ancilla)))
            gates.append(Gate(GateKind.S, (i,)))
            gates.append(Gate(GateKind.SX, (ancilla,)))
            phase += ECR_GLOBAL_PHASE
    return gates, phase % (2.0 * math.pi)


def build_oracle_circuit(secret: "SecretString | str", oracle_style: OracleStyle = OracleStyle.CNOT) -> Circuit:
    """Just the oracle segment on n data qubits plus the ancilla, no measurement."""
    secret = _coerce_secret(secret)
    n = len(secret)
    gates, phase = _oracle_gates(secret, oracle_style, ancilla=n)
    return Circuit(num_data_qubits=n, has_ancilla=True, gates=tuple(gates), global_phase=phase)


def build_bv_circuit(secret: "SecretString | str", oracle_style: OracleStyle = OracleStyle.CNOT) -> Circuit:
    """Full Bernstein-Vazirani circuit for a hidden string.

    Layout: X on the ancilla, H on every qubit, the oracle, H on the data
    qubits, then MEASURE on each data qubit.  An ideal run returns the
    secret with probability 1.
    """
    secret = _coerce_secret(secret)
    n = len(secret)
    ancilla = n
    gates: list[Gate] = [Gate(GateKind.X, (ancilla,))]
    gates += [Gate(GateKind.H, (q,)) for q in range(n + 1)]
    oracle, phase = _oracle_gates(secret, oracle_style, ancilla)
    gates += oracle
    gates += [Gate(GateKind.H, (q,)) for q in range(n)]
    gates += [Gate(GateKind.MEASURE, (q,)) for q in range(n)]
    return Circuit(num_data_qubits=n, has_ancilla=True, gates=tuple(gates), global_phase=phase)


MAX_UNITARY_QUBITS = 12


def circuit_unitary(circuit: Circuit) -> Unitary:
    """Full-register unitary of a circuit (MEASURE gates ignored), with global phase."""
    m = circuit.num_qubits
    if m > MAX_UNITARY_QUBITS:
        raise ValueError(f"unitary construction limited to {MAX_UNITARY_QUBITS} qubits, got {m}")
    dim = 2**m
    mat = np.eye(dim, dtype=np.complex128)
    tensor = mat.reshape((2,) * m + (dim,))
    for gate in circuit.gates:
        if gate.kind is GateKind.MEASURE:
            continue
        tensor = _apply_matrix(tensor, gate_matrix(gate.kind, gate.param), gate.targets)
    mat = tensor.reshape(dim, dim) * np.exp(1j * circuit.global_phase)
    return Unitary(mat)


MAX_ORACLE_QUBITS = 10


def oracle_unitary(secret: "SecretString | str") -> Unitary:
    """Unitary of the canonical CNOT-product oracle on n data qubits + ancilla.

    Maps |x>|y> to |x>|y XOR s.x mod 2>.  Intended for verification at
    small n; the simulator never materializes this matrix.
    """
    secret = _coerce_secret(secret)
    if len(secret) > MAX_ORACLE_QUBITS:
        raise ValueError(f"oracle unitary limited to {MAX_ORACLE_QUBITS} data qubits, got {len(secret)}")
    return circuit_unitary(build_oracle_circuit(secret, OracleStyle.CNOT))
