"""Dense linear algebra for multi-qubit states, unitaries, and noise channels.

Conventions
-----------
Qubit ordering is big-endian: qubit 0 is the most significant bit of a
basis-state index, so index ``i`` on an ``m``-qubit register corresponds to
the bitstring ``format(i, f"0{m}b")`` read left to right.  Measurement
outcome strings produced elsewhere in the package therefore print in the
same order as the qubits they describe, with no reversal.

All state-like objects are immutable after construction (backing arrays
are marked read-only) and every operation is a pure function, so values
may be shared freely between threads.

Tolerances: 1e-10 on unitary paths, 1e-9 on channel paths; both sized for
double-precision accumulation over at most a few hundred operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

UNITARY_ATOL = 1e-10
CHANNEL_ATOL = 1e-9
PSD_EIGENVALUE_FLOOR = -1e-8


def _to_complex_array(data, name: str) -> np.ndarray:
    arr = np.array(data, dtype=np.complex128)
    if not (np.isfinite(arr.real).all() and np.isfinite(arr.imag).all()):
        raise ValueError(f"{name} contains non-finite entries")
    arr.setflags(write=False)
    return arr


def _qubits_from_dim(dim: int, name: str) -> int:
    n = int(dim).bit_length() - 1
    if dim < 2 or (1 << n) != dim:
        raise ValueError(f"{name} dimension {dim} is not a power of two >= 2")
    return n


def _validate_targets(targets: Sequence[int], num_qubits: int) -> tuple[int, ...]:
    targets = tuple(int(t) for t in targets)
    if len(set(targets)) != len(targets):
        raise ValueError(f"duplicate target index in {targets}")
    for t in targets:
        if not 0 <= t < num_qubits:
            raise ValueError(f"target qubit {t} out of range for {num_qubits}-qubit register")
    return targets


@dataclass(frozen=True, eq=False)
class StateVector:
    """Pure state of a qubit register as a length-2^n complex amplitude array."""

    amplitudes: np.ndarray

    def __post_init__(self):
        arr = _to_complex_array(self.amplitudes, "state vector")
        if arr.ndim != 1:
            raise ValueError("state vector must be one-dimensional")
        _qubits_from_dim(arr.size, "state vector")
        norm2 = float(np.vdot(arr, arr).real)
        if abs(norm2 - 1.0) > 1e-8:
            raise ValueError(f"state vector is not normalized: |psi|^2 = {norm2!r}")
        object.__setattr__(self, "amplitudes", arr)

    @property
    def num_qubits(self) -> int:
        return self.amplitudes.size.bit_length() - 1

    @classmethod
    def zero(cls, num_qubits: int) -> "StateVector":
        """|0...0> on ``num_qubits`` qubits."""
        amps = np.zeros(2**num_qubits, dtype=np.complex128)
        amps[0] = 1.0
        return cls(amps)

    @classmethod
    def from_bits(cls, bits: str) -> "StateVector":
        """Computational basis state for a bitstring, leftmost char = qubit 0."""
        if not bits or set(bits) - {"0", "1"}:
            raise ValueError(f"invalid bitstring {bits!r}")
        amps = np.zeros(2 ** len(bits), dtype=np.complex128)
        amps[int(bits, 2)] = 1.0
        return cls(amps)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Possibly mixed state of a qubit register as a 2^n x 2^n matrix.

    Construction checks Hermiticity and unit trace; positivity is only
    verified on demand (``eigenvalues``) since it costs O(dim^3).
    """

    elements: np.ndarray

    def __post_init__(self):
        arr = _to_complex_array(self.elements, "density matrix")
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("density matrix must be square")
        _qubits_from_dim(arr.shape[0], "density matrix")
        if np.abs(arr - arr.conj().T).max() > 1e-8:
            raise ValueError("density matrix is not Hermitian")
        tr = complex(np.trace(arr))
        if abs(tr - 1.0) > 1e-7:
            raise ValueError(f"density matrix trace is {tr!r}, expected 1")
        object.__setattr__(self, "elements", arr)

    @property
    def num_qubits(self) -> int:
        return self.elements.shape[0].bit_length() - 1

    @property
    def dim(self) -> int:
        return self.elements.shape[0]

    @classmethod
    def from_statevector(cls, state: StateVector) -> "DensityMatrix":
        return cls(np.outer(state.amplitudes, state.amplitudes.conj()))

    @classmethod
    def from_bits(cls, bits: str) -> "DensityMatrix":
        return cls.from_statevector(StateVector.from_bits(bits))

    @classmethod
    def maximally_mixed(cls, num_qubits: int) -> "DensityMatrix":
        dim = 2**num_qubits
        return cls(np.eye(dim, dtype=np.complex128) / dim)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.elements)

    def purity(self) -> float:
        return float(np.einsum("ij,ji->", self.elements, self.elements).real)

    def diagonal_probabilities(self) -> np.ndarray:
        return np.clip(np.diag(self.elements).real, 0.0, None)


@dataclass(frozen=True, eq=False)
class Unitary:
    """Square matrix with U†U = I within 1e-10, dimension a power of two."""

    elements: np.ndarray

    def __post_init__(self):
        arr = _to_complex_array(self.elements, "unitary")
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("unitary must be square")
        _qubits_from_dim(arr.shape[0], "unitary")
        gram = arr.conj().T @ arr
        if np.abs(gram - np.eye(arr.shape[0])).max() > UNITARY_ATOL:
            raise ValueError("matrix is not unitary within 1e-10")
        object.__setattr__(self, "elements", arr)

    @property
    def dim(self) -> int:
        return self.elements.shape[0]

    @property
    def num_qubits(self) -> int:
        return self.dim.bit_length() - 1

    def dagger(self) -> "Unitary":
        return Unitary(self.elements.conj().T)


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Completely positive trace-preserving map given by Kraus operators.

    Rejects operator sets whose completeness sum deviates from the identity
    by more than 1e-9, so a constructed channel is always trace preserving.
    """

    operators: tuple[np.ndarray, ...]

    def __post_init__(self):
        ops = tuple(_to_complex_array(op, "Kraus operator") for op in self.operators)
        if not ops:
            raise ValueError("channel needs at least one Kraus operator")
        dim = ops[0].shape[0]
        for op in ops:
            if op.ndim != 2 or op.shape != (dim, dim):
                raise ValueError("Kraus operators must be square and equally sized")
        _qubits_from_dim(dim, "Kraus operator")
        total = sum(op.conj().T @ op for op in ops)
        if np.abs(total - np.eye(dim)).max() > CHANNEL_ATOL:
            raise ValueError("Kraus operators are not trace preserving within 1e-9")
        object.__setattr__(self, "operators", ops)

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]

    @property
    def num_qubits(self) -> int:
        return self.dim.bit_length() - 1

    @classmethod
    def identity(cls, num_qubits: int = 1) -> "KrausChannel":
        return cls((np.eye(2**num_qubits, dtype=np.complex128),))


def _apply_matrix(tensor: np.ndarray, mat: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    """Contract a 2^k x 2^k matrix into ``tensor`` along ``axes`` (ket index order)."""
    k = len(axes)
    op = np.asarray(mat).reshape((2,) * (2 * k))
    moved = np.tensordot(op, tensor, axes=(tuple(range(k, 2 * k)), tuple(axes)))
    return np.moveaxis(moved, tuple(range(k)), tuple(axes))


def apply_unitary(state: StateVector, u: Unitary, targets: Sequence[int]) -> StateVector:
    """Apply ``u`` to the given target qubits of a pure state.

    ``targets[0]`` corresponds to the most significant bit of the gate
    matrix index, matching the register-wide big-endian convention.
    """
    targets = _validate_targets(targets, state.num_qubits)
    if u.dim != 2 ** len(targets):
        raise ValueError(f"unitary dim {u.dim} does not match {len(targets)} target qubit(s)")
    tensor = state.amplitudes.reshape((2,) * state.num_qubits)
    out = _apply_matrix(tensor, u.elements, targets)
    return StateVector(out.reshape(-1))


def apply_unitary_to_density(rho: DensityMatrix, u: Unitary, targets: Sequence[int]) -> DensityMatrix:
    """rho -> U rho U† on the target subspace."""
    targets = _validate_targets(targets, rho.num_qubits)
    if u.dim != 2 ** len(targets):
        raise ValueError(f"unitary dim {u.dim} does not match {len(targets)} target qubit(s)")
    m = rho.num_qubits
    tensor = rho.elements.reshape((2,) * (2 * m))
    out = _apply_matrix(tensor, u.elements, targets)
    out = _apply_matrix(out, u.elements.conj(), [m + t for t in targets])
    return DensityMatrix(out.reshape(rho.dim, rho.dim))


def apply_channel(rho: DensityMatrix, ch: KrausChannel, targets: Sequence[int]) -> DensityMatrix:
    """rho -> sum_i K_i rho K_i† on the target subspace."""
    targets = _validate_targets(targets, rho.num_qubits)
    if ch.dim != 2 ** len(targets):
        raise ValueError(f"channel dim {ch.dim} does not match {len(targets)} target qubit(s)")
    m = rho.num_qubits
    tensor = rho.elements.reshape((2,) * (2 * m))
    col_axes = [m + t for t in targets]
    acc = None
    for kraus in ch.operators:
        term = _apply_matrix(tensor, kraus, targets)
        term = _apply_matrix(term, kraus.conj(), col_axes)
        acc = term if acc is None else acc + term
    return DensityMatrix(acc.reshape(rho.dim, rho.dim))


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Trace out all qubits not in ``keep``.

    Kept qubits retain their original relative (ascending-index) order.
    """
    keep_set = set(int(q) for q in keep)
    if not keep_set:
        raise ValueError("keep list must not be empty")
    m = rho.num_qubits
    for q in keep_set:
        if not 0 <= q < m:
            raise ValueError(f"keep qubit {q} out of range for {m}-qubit register")
    if len(keep_set) == m:
        return rho
    tensor = rho.elements.reshape((2,) * (2 * m))
    remaining = m
    for q in sorted(set(range(m)) - keep_set, reverse=True):
        tensor = np.trace(tensor, axis1=q, axis2=remaining + q)
        remaining -= 1
    dim = 2**remaining
    return DensityMatrix(tensor.reshape(dim, dim))


def kron(a: Unitary, b: Unitary) -> Unitary:
    """Kronecker product; ``a`` occupies the more significant index bits."""
    return Unitary(np.kron(a.elements, b.elements))
