"""Quantum state tomography of the data register.

Protocol: prepare the final state, measure it repeatedly in every
per-qubit X/Y/Z basis combination (3^n settings, shots split as evenly
as integer division allows), estimate all 4^n Pauli expectation values
by pooling each estimate over every compatible setting, linearly invert
to a raw matrix, project that onto the physical set (closest PSD trace-1
matrix in Frobenius norm, via eigenvalue redistribution), and score the
result with the square-root state fidelity against the ideal state.

Basis-change conventions: X measures after H, Y after S-dagger then H,
Z directly.  A qubit's outcome bit 0 therefore means the +1 eigenstate
of the chosen Pauli.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .circuits import Circuit
from .linalg import DensityMatrix, Unitary, apply_unitary_to_density
from .seeding import rng_from, spawn_seed
from .simulator import CountsDistribution, RegisterTooLargeError, final_density_matrix
from .noise import NoiseModel

MAX_TOMOGRAPHY_QUBITS = 6

_SQ = 1.0 / math.sqrt(2.0)
_H = np.array([[_SQ, _SQ], [_SQ, -_SQ]], dtype=np.complex128)
_SDG = np.array([[1, 0], [0, -1j]], dtype=np.complex128)
_ROTATIONS = {
    "X": _H,
    "Y": _H @ _SDG,
    "Z": np.eye(2, dtype=np.complex128),
}
_PAULIS = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}
_SIGMA_STACK = np.stack([_PAULIS[c] for c in "IXYZ"])


@dataclass(frozen=True)
class MeasurementSetting:
    """One measurement basis per data qubit plus its shot budget."""

    bases: str
    shots_assigned: int

    def __post_init__(self):
        if not self.bases or set(self.bases) - set("XYZ"):
            raise ValueError(f"bases must be a non-empty string over XYZ, got {self.bases!r}")
        if self.shots_assigned < 0:
            raise ValueError("shots_assigned must be >= 0")


@dataclass(frozen=True, eq=False)
class TomographyResult:
    """Raw and projected reconstructions plus fidelity against the ideal state."""

    rho_raw: np.ndarray
    rho_physical: DensityMatrix
    fidelity: float
    total_shots: int
    num_settings: int

    def to_dict(self) -> dict:
        def flatten(mat: np.ndarray) -> list[list[float]]:
            return [[float(z.real), float(z.imag)] for z in np.asarray(mat).reshape(-1)]

        return {
            "num_qubits": self.rho_physical.num_qubits,
            "fidelity": self.fidelity,
            "total_shots": self.total_shots,
            "num_settings": self.num_settings,
            "rho_physical": flatten(self.rho_physical.elements),
            "rho_raw": flatten(self.rho_raw),
        }


def generate_settings(n: int, total_shots: int) -> list[MeasurementSetting]:
    """All 3^n X/Y/Z settings in lexicographic order, shots split evenly.

    The remainder after integer division goes to the lexicographically
    earliest settings, one extra shot each.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    num_settings = 3**n
    if total_shots < num_settings:
        raise ValueError(
            f"total_shots = {total_shots} cannot cover {num_settings} settings with >= 1 shot each"
        )
    base, remainder = divmod(total_shots, num_settings)
    settings = []
    for idx, combo in enumerate(itertools.product("XYZ", repeat=n)):
        settings.append(
            MeasurementSetting("".join(combo), base + (1 if idx < remainder else 0))
        )
    return settings


def _rotated(rho: DensityMatrix, bases: str) -> DensityMatrix:
    out = rho
    for q, basis in enumerate(bases):
        if basis != "Z":
            out = apply_unitary_to_density(out, Unitary(_ROTATIONS[basis]), [q])
    return out


def setting_distribution(rho: DensityMatrix, bases: str) -> dict[str, float]:
    """Exact outcome probabilities when measuring ``rho`` in a basis setting."""
    if len(bases) != rho.num_qubits:
        raise ValueError(f"setting length {len(bases)} does not match {rho.num_qubits} qubits")
    probs = _rotated(rho, bases).diagonal_probabilities()
    n = rho.num_qubits
    return {format(i, f"0{n}b"): float(p) for i, p in enumerate(probs) if p > 1e-15}


def measure_in_basis(rho: DensityMatrix, setting: MeasurementSetting, seed: int) -> CountsDistribution:
    """Sample a setting's outcomes: rotate to the computational basis, then draw."""
    if len(setting.bases) != rho.num_qubits:
        raise ValueError(
            f"setting length {len(setting.bases)} does not match {rho.num_qubits} qubits"
        )
    probs = _rotated(rho, setting.bases).diagonal_probabilities()
    p = probs / probs.sum()
    draw = rng_from(seed).multinomial(setting.shots_assigned, p)
    n = rho.num_qubits
    counts = {format(i, f"0{n}b"): int(c) for i, c in enumerate(draw) if c}
    return CountsDistribution(n_bits=n, counts=counts)


def _walsh_sums(counts: Mapping[str, float], n: int) -> np.ndarray:
    """All 2^n signed outcome sums at once.

    Entry at mask m is sum over outcomes of count * (-1)^(parity of the
    outcome bits selected by m) - the expectation numerator for the Pauli
    whose non-identity positions are exactly the bits set in m.
    """
    vec = np.zeros(2**n, dtype=np.float64)
    for key, value in counts.items():
        vec[int(key, 2)] += value
    tensor = vec.reshape((2,) * n)
    sign = np.array([[1.0, 1.0], [1.0, -1.0]])
    for axis in range(n):
        tensor = np.moveaxis(np.tensordot(sign, tensor, axes=(1, axis)), 0, axis)
    return tensor.reshape(-1)


def pauli_expectations(
    results: Sequence[tuple["MeasurementSetting | str", "CountsDistribution | Mapping[str, float]"]],
) -> dict[str, float]:
    """Estimate every 4^n Pauli-string expectation from setting data.

    A Pauli with identity positions is compatible with every setting that
    matches it elsewhere; its estimate pools signed counts over all of
    them, weighted by each setting's shot total.
    """
    normalized: dict[str, Mapping[str, float]] = {}
    for setting, counts in results:
        bases = setting.bases if isinstance(setting, MeasurementSetting) else str(setting)
        if bases in normalized:
            raise ValueError(f"duplicate setting {bases!r}")
        normalized[bases] = counts.counts if isinstance(counts, CountsDistribution) else dict(counts)
    if not normalized:
        raise ValueError("no measurement results supplied")
    n = len(next(iter(normalized)))
    expected = {"".join(c) for c in itertools.product("XYZ", repeat=n)}
    if set(normalized) != expected:
        missing = sorted(expected - set(normalized))[:5]
        raise ValueError(f"missing settings, e.g. {missing}")

    signed: dict[str, float] = {}
    weight: dict[str, float] = {}
    for bases, counts in normalized.items():
        sums = _walsh_sums(counts, n)
        total = sums[0]
        for mask in range(2**n):
            pauli = "".join(
                bases[i] if (mask >> (n - 1 - i)) & 1 else "I" for i in range(n)
            )
            signed[pauli] = signed.get(pauli, 0.0) + sums[mask]
            weight[pauli] = weight.get(pauli, 0.0) + total
    out: dict[str, float] = {}
    for pauli, num in signed.items():
        if weight[pauli] <= 0:
            raise ValueError(f"no shots available for Pauli {pauli}")
        out[pauli] = num / weight[pauli]
    out["I" * n] = 1.0
    return out


def linear_inversion(
    results: Sequence[tuple["MeasurementSetting | str", "CountsDistribution | Mapping[str, float]"]],
) -> np.ndarray:
    """Raw (possibly unphysical) reconstruction rho = 2^-n sum_P <P> P."""
    expectations = pauli_expectations(results)
    n = len(next(iter(expectations)))
    coeff = np.zeros((4,) * n, dtype=np.complex128)
    index = {c: i for i, c in enumerate("IXYZ")}
    for pauli, value in expectations.items():
        coeff[tuple(index[c] for c in pauli)] = value
    tensor = coeff
    for _ in range(n):
        tensor = np.tensordot(tensor, _SIGMA_STACK, axes=([0], [0]))
    # axes now (i1, j1, i2, j2, ...): interleave back to row-major matrix form
    order = list(range(0, 2 * n, 2)) + list(range(1, 2 * n, 2))
    rho = tensor.transpose(order).reshape(2**n, 2**n) / 2**n
    return rho


def project_to_physical(rho_raw: np.ndarray) -> DensityMatrix:
    """Closest PSD trace-1 matrix in Frobenius norm.

    Eigenvalue redistribution: zero out the most negative eigenvalues and
    spread their deficit uniformly over the rest, which is exactly the
    Euclidean projection of the spectrum onto the probability simplex.
    Physical inputs pass through unchanged.
    """
    rho_raw = np.asarray(rho_raw, dtype=np.complex128)
    if rho_raw.ndim != 2 or rho_raw.shape[0] != rho_raw.shape[1]:
        raise ValueError("input must be a square matrix")
    asym = np.abs(rho_raw - rho_raw.conj().T).max()
    if asym > 1e-8:
        raise ValueError(f"input is not Hermitian (max asymmetry {asym:.3e})")
    herm = 0.5 * (rho_raw + rho_raw.conj().T)
    eigvals, eigvecs = np.linalg.eigh(herm)
    mu = eigvals[::-1]  # descending
    cumulative = np.cumsum(mu)
    k = np.arange(1, len(mu) + 1)
    theta_candidates = (cumulative - 1.0) / k
    k_star = int(np.max(np.nonzero(mu > theta_candidates)[0])) if np.any(mu > theta_candidates) else 0
    theta = theta_candidates[k_star]
    lam = np.clip(eigvals - theta, 0.0, None)
    projected = (eigvecs * lam) @ eigvecs.conj().T
    projected = 0.5 * (projected + projected.conj().T)
    return DensityMatrix(projected)


def state_fidelity(rho_ideal: DensityMatrix, rho_exp: DensityMatrix) -> float:
    """Square-root state fidelity Tr sqrt(sqrt(a) b sqrt(a)), in [0, 1].

    For a pure first argument |s><s| this reduces to sqrt(<s|b|s>).
    """
    if rho_ideal.dim != rho_exp.dim:
        raise ValueError("density matrices must have equal dimension")
    w, v = np.linalg.eigh(rho_ideal.elements)
    sqrt_ideal = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    inner = sqrt_ideal @ rho_exp.elements @ sqrt_ideal
    eigs = np.clip(np.linalg.eigvalsh(inner), 0.0, None)
    fid = float(np.sqrt(eigs).sum())
    if fid > 1.0 + 1e-9:
        raise ValueError(f"fidelity {fid} exceeds 1 beyond tolerance; inputs non-physical?")
    return min(fid, 1.0)


def run_qst(
    circuit: Circuit,
    model: NoiseModel | None,
    total_shots: int,
    seed: int,
) -> TomographyResult:
    """Full tomography pass over a circuit's data register.

    Prepares the (possibly noisy) final state, measures every X/Y/Z
    setting with a per-setting derived seed, inverts, projects, and
    scores fidelity against the noise-free state.
    """
    n = circuit.num_data_qubits
    if n > MAX_TOMOGRAPHY_QUBITS:
        raise RegisterTooLargeError(
            f"tomography limited to {MAX_TOMOGRAPHY_QUBITS} data qubits, got {n}"
        )
    rho = final_density_matrix(circuit, model)
    ideal = final_density_matrix(circuit, None) if model is not None else rho
    settings = generate_settings(n, total_shots)
    results = [
        (setting, measure_in_basis(rho, setting, spawn_seed(seed, idx)))
        for idx, setting in enumerate(settings)
    ]
    rho_raw = linear_inversion(results)
    rho_physical = project_to_physical(rho_raw)
    fidelity = state_fidelity(ideal, rho_physical)
    return TomographyResult(
        rho_raw=rho_raw,
        rho_physical=rho_physical,
        fidelity=fidelity,
        total_shots=total_shots,
        num_settings=len(settings),
    )
