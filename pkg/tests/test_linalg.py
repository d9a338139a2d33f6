import math

import numpy as np
import pytest

from bvbench.linalg import (
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

SQ = 1.0 / math.sqrt(2.0)
H = np.array([[SQ, SQ], [SQ, -SQ]], dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
S = np.array([[1, 0], [0, 1j]], dtype=complex)
SX = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex)
I2 = np.eye(2, dtype=complex)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    mat = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(mat)
    return q * (np.diag(r) / np.abs(np.diag(r)))


class TestStateVector:
    def test_zero_state(self):
        sv = StateVector.zero(3)
        assert sv.num_qubits == 3
        assert sv.amplitudes[0] == 1.0
        assert np.count_nonzero(sv.amplitudes) == 1

    def test_from_bits_big_endian(self):
        # qubit 0 is the leftmost character, i.e. the most significant bit
        sv = StateVector.from_bits("10")
        assert sv.amplitudes[int("10", 2)] == 1.0

    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError, match="normalized"):
            StateVector(np.array([1.0, 1.0]))

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError, match="finite"):
            StateVector(np.array([np.inf, 0.0]))

    def test_rejects_bad_length(self):
        with pytest.raises(ValueError):
            StateVector(np.array([1.0, 0.0, 0.0]))

    def test_immutable(self):
        sv = StateVector.zero(1)
        with pytest.raises(ValueError):
            sv.amplitudes[0] = 0.5


class TestDensityMatrix:
    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError, match="Hermitian"):
            DensityMatrix(np.array([[1.0, 1.0], [0.0, 0.0]]))

    def test_rejects_bad_trace(self):
        with pytest.raises(ValueError, match="trace"):
            DensityMatrix(np.array([[0.5, 0.0], [0.0, 0.0]]))

    def test_maximally_mixed_purity(self):
        rho = DensityMatrix.maximally_mixed(3)
        assert rho.purity() == pytest.approx(1 / 8, abs=1e-12)

    def test_pure_state_purity(self):
        rho = DensityMatrix.from_bits("01")
        assert rho.purity() == pytest.approx(1.0, abs=1e-12)


class TestUnitaryType:
    def test_rejects_non_unitary(self):
        with pytest.raises(ValueError, match="unitary"):
            Unitary(np.array([[1.0, 0.0], [0.0, 2.0]]))

    def test_dagger(self):
        u = Unitary(S)
        assert np.allclose(u.dagger().elements @ u.elements, I2)


class TestApplyUnitary:
    def test_hadamard_on_zero(self):
        out = apply_unitary(StateVector.zero(1), Unitary(H), [0])
        assert np.allclose(out.amplitudes, [SQ, SQ], atol=1e-12)

    def test_cnot_control_zero_is_identity(self):
        out = apply_unitary(StateVector.from_bits("00"), Unitary(CNOT), [0, 1])
        assert np.allclose(out.amplitudes, StateVector.from_bits("00").amplitudes)

    def test_cnot_flips_target(self):
        out = apply_unitary(StateVector.from_bits("10"), Unitary(CNOT), [0, 1])
        assert np.allclose(out.amplitudes, StateVector.from_bits("11").amplitudes)

    def test_ecr_matches_equivalence_product_on_basis_state(self):
        # Independent construction: phase * (X(x)I) @ CNOT @ (S(x)SX), applied to |10>
        from bvbench.circuits import gate_matrix, GateKind

        product = np.exp(1j * 7 * np.pi / 4) * (np.kron(X, I2) @ CNOT @ np.kron(S, SX))
        expected = product @ StateVector.from_bits("10").amplitudes
        out = apply_unitary(
            StateVector.from_bits("10"), Unitary(gate_matrix(GateKind.ECR)), [0, 1]
        )
        assert np.abs(out.amplitudes - expected).max() < 1e-12

    def test_single_qubit_gate_on_middle_qubit(self):
        out = apply_unitary(StateVector.from_bits("010"), Unitary(X), [1])
        assert np.allclose(out.amplitudes, StateVector.from_bits("000").amplitudes)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dim"):
            apply_unitary(StateVector.zero(2), Unitary(CNOT), [0])

    def test_duplicate_targets(self):
        with pytest.raises(ValueError, match="duplicate"):
            apply_unitary(StateVector.zero(2), Unitary(CNOT), [0, 0])

    def test_out_of_range_target(self):
        with pytest.raises(ValueError, match="out of range"):
            apply_unitary(StateVector.zero(1), Unitary(H), [1])

    def test_norm_conserved_over_random_circuits(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            n = int(rng.integers(1, 5))
            sv = StateVector.zero(n)
            for _ in range(60):
                k = int(rng.integers(1, min(n, 2) + 1))
                targets = list(rng.choice(n, size=k, replace=False))
                sv = apply_unitary(sv, Unitary(random_unitary(2**k, rng)), targets)
            assert abs(np.vdot(sv.amplitudes, sv.amplitudes).real - 1.0) < 1e-10


class TestChannels:
    def test_rejects_incomplete_kraus(self):
        with pytest.raises(ValueError, match="trace preserving"):
            KrausChannel((0.5 * I2,))

    def test_identity_channel_fixes_state(self):
        rho = DensityMatrix.from_bits("0")
        out = apply_channel(rho, KrausChannel.identity(1), [0])
        assert np.allclose(out.elements, rho.elements, atol=1e-14)

    def test_full_amplitude_damping_resets_excited_state(self):
        damp = KrausChannel(
            (np.array([[1, 0], [0, 0]], dtype=complex), np.array([[0, 1], [0, 0]], dtype=complex))
        )
        out = apply_channel(DensityMatrix.from_bits("1"), damp, [0])
        assert np.allclose(out.elements, DensityMatrix.from_bits("0").elements, atol=1e-12)

    def test_dephasing_scales_off_diagonals(self):
        # K = {sqrt(1-p/2) I, sqrt(p/2) Z} shrinks coherences by (1-p); hand value for p=0.5
        p = 0.5
        ch = KrausChannel((math.sqrt(1 - p / 2) * I2, math.sqrt(p / 2) * Z))
        plus = DensityMatrix(np.full((2, 2), 0.5, dtype=complex))
        out = apply_channel(plus, ch, [0])
        assert out.elements[0, 1] == pytest.approx(0.5 * (1 - p), abs=1e-12)
        assert out.elements[0, 0] == pytest.approx(0.5, abs=1e-12)

    def test_trace_preserved_per_application(self):
        rng = np.random.default_rng(3)
        damp = KrausChannel(
            (
                np.array([[1, 0], [0, math.sqrt(0.7)]], dtype=complex),
                np.array([[0, math.sqrt(0.3)], [0, 0]], dtype=complex),
            )
        )
        rho = DensityMatrix.maximally_mixed(3)
        u = Unitary(random_unitary(8, rng))
        rho = apply_unitary_to_density(rho, u, [0, 1, 2])
        for _ in range(50):
            rho = apply_channel(rho, damp, [1])
            assert abs(np.trace(rho.elements).real - 1.0) < 1e-9
            assert np.abs(rho.elements - rho.elements.conj().T).max() < 1e-9

    def test_purity_bounds_under_channels(self):
        rng = np.random.default_rng(11)
        n = 2
        rho = DensityMatrix.from_bits("00")
        damp = KrausChannel(
            (
                np.array([[1, 0], [0, math.sqrt(0.4)]], dtype=complex),
                np.array([[0, math.sqrt(0.6)], [0, 0]], dtype=complex),
            )
        )
        for _ in range(30):
            rho = apply_unitary_to_density(rho, Unitary(random_unitary(2, rng)), [int(rng.integers(n))])
            rho = apply_channel(rho, damp, [int(rng.integers(n))])
            assert 2**-n - 1e-9 <= rho.purity() <= 1 + 1e-9


class TestPartialTrace:
    def test_product_state(self):
        out = partial_trace(DensityMatrix.from_bits("00"), [0])
        assert np.allclose(out.elements, DensityMatrix.from_bits("0").elements)

    def test_bell_state_marginal_is_maximally_mixed(self):
        bell = StateVector(np.array([SQ, 0, 0, SQ], dtype=complex))
        out = partial_trace(DensityMatrix.from_statevector(bell), [0])
        assert np.allclose(out.elements, np.eye(2) / 2, atol=1e-12)

    def test_data_register_of_output_with_minus_ancilla(self):
        # |s> (x) |-> for s = "10"; tracing the ancilla must leave |s><s|
        s = StateVector.from_bits("10").amplitudes
        minus = np.array([SQ, -SQ], dtype=complex)
        full = DensityMatrix.from_statevector(StateVector(np.kron(s, minus)))
        out = partial_trace(full, [0, 1])
        assert np.abs(out.elements - np.outer(s, s.conj())).max() < 1e-12

    def test_trace_preserved(self):
        rho = DensityMatrix.maximally_mixed(3)
        out = partial_trace(rho, [1])
        assert np.trace(out.elements).real == pytest.approx(1.0, abs=1e-10)

    def test_empty_keep_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            partial_trace(DensityMatrix.maximally_mixed(2), [])


class TestKron:
    def test_identity_product(self):
        out = kron(Unitary(I2), Unitary(I2))
        assert np.allclose(out.elements, np.eye(4))

    def test_hh_creates_uniform_superposition(self):
        hh = kron(Unitary(H), Unitary(H))
        out = apply_unitary(StateVector.zero(2), hh, [0, 1])
        assert np.allclose(out.amplitudes, np.full(4, 0.5), atol=1e-12)

    def test_h3_column_magnitudes(self):
        h3 = kron(kron(Unitary(H), Unitary(H)), Unitary(H))
        assert np.allclose(np.abs(h3.elements), 2 ** (-1.5), atol=1e-12)


def test_statevector_and_density_paths_agree_without_noise():
    rng = np.random.default_rng(5)
    for _ in range(5):
        n = 3
        sv = StateVector.zero(n)
        rho = DensityMatrix.from_statevector(sv)
        for _ in range(25):
            k = int(rng.integers(1, 3))
            targets = list(rng.choice(n, size=k, replace=False))
            u = Unitary(random_unitary(2**k, rng))
            sv = apply_unitary(sv, u, targets)
            rho = apply_unitary_to_density(rho, u, targets)
        assert np.abs(rho.elements - np.outer(sv.amplitudes, sv.amplitudes.conj())).max() < 1e-9
