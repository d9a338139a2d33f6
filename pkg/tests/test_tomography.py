import itertools
import math

import numpy as np
import pytest

from bvbench.circuits import build_bv_circuit
from bvbench.linalg import DensityMatrix, StateVector, Unitary, apply_unitary
from bvbench.noise import build_noise_model, uniform_snapshot
from bvbench.simulator import RegisterTooLargeError, final_density_matrix
from bvbench.tomography import (
    MeasurementSetting,
    generate_settings,
    linear_inversion,
    measure_in_basis,
    pauli_expectations,
    project_to_physical,
    run_qst,
    setting_distribution,
    state_fidelity,
)

SQ = 1.0 / math.sqrt(2.0)
H = np.array([[SQ, SQ], [SQ, -SQ]], dtype=complex)
SDG = np.array([[1, 0], [0, -1j]], dtype=complex)
ROT = {"X": H, "Y": H @ SDG, "Z": np.eye(2, dtype=complex)}


def exact_results(rho: DensityMatrix):
    """Infinite-shot setting data computed with inline rotation matrices."""
    n = rho.num_qubits
    out = []
    for combo in itertools.product("XYZ", repeat=n):
        bases = "".join(combo)
        u = np.array([[1.0]], dtype=complex)
        for c in bases:
            u = np.kron(u, ROT[c])
        probs = np.diag(u @ rho.elements @ u.conj().T).real
        out.append((bases, {format(i, f"0{n}b"): float(p) for i, p in enumerate(probs)}))
    return out


class TestGenerateSettings:
    def test_even_split(self):
        settings = generate_settings(1, 300)
        assert [s.bases for s in settings] == ["X", "Y", "Z"]
        assert all(s.shots_assigned == 100 for s in settings)

    def test_six_qubit_split(self):
        settings = generate_settings(6, 21000)
        assert len(settings) == 729
        shots = [s.shots_assigned for s in settings]
        assert sum(shots) == 21000
        # 21000 = 729*28 + 588: the first 588 settings get one extra shot
        assert shots[:588] == [29] * 588
        assert shots[588:] == [28] * 141

    def test_four_qubit_split(self):
        settings = generate_settings(4, 3696)
        assert len(settings) == 81
        shots = [s.shots_assigned for s in settings]
        assert sum(shots) == 3696
        assert shots[:51] == [46] * 51
        assert shots[51:] == [45] * 30

    def test_lexicographic_order(self):
        settings = generate_settings(2, 18)
        assert [s.bases for s in settings] == [
            "XX", "XY", "XZ", "YX", "YY", "YZ", "ZX", "ZY", "ZZ",
        ]

    def test_insufficient_shots(self):
        with pytest.raises(ValueError, match="cannot cover"):
            generate_settings(3, 26)


class TestMeasureInBasis:
    def test_zero_state_in_z(self):
        counts = measure_in_basis(
            DensityMatrix.from_bits("0"), MeasurementSetting("Z", 500), seed=1
        )
        assert counts.counts == {"0": 500}

    def test_plus_state_in_x(self):
        plus = DensityMatrix(np.full((2, 2), 0.5, dtype=complex))
        counts = measure_in_basis(plus, MeasurementSetting("X", 500), seed=1)
        assert counts.counts == {"0": 500}

    def test_plus_i_state_in_y(self):
        # |+i> = S H |0>
        s_gate = np.array([[1, 0], [0, 1j]], dtype=complex)
        vec = s_gate @ H @ np.array([1, 0], dtype=complex)
        rho = DensityMatrix(np.outer(vec, vec.conj()))
        counts = measure_in_basis(rho, MeasurementSetting("Y", 500), seed=1)
        assert counts.counts == {"0": 500}

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="does not match"):
            measure_in_basis(DensityMatrix.from_bits("00"), MeasurementSetting("Z", 10), seed=0)


class TestLinearInversion:
    def test_exact_zero_state(self):
        rho = linear_inversion(exact_results(DensityMatrix.from_bits("0")))
        assert np.abs(rho - DensityMatrix.from_bits("0").elements).max() < 1e-12

    def test_exact_bell_state(self):
        bell = DensityMatrix.from_statevector(
            StateVector(np.array([SQ, 0, 0, SQ], dtype=complex))
        )
        rho = linear_inversion(exact_results(bell))
        assert np.abs(rho - bell.elements).max() < 1e-12
        assert state_fidelity(bell, project_to_physical(rho)) == pytest.approx(1.0, abs=1e-9)

    def test_finite_shot_zero_state_trace_distance(self):
        rho0 = DensityMatrix.from_bits("0")
        results = [
            (s, measure_in_basis(rho0, s, seed=50 + i))
            for i, s in enumerate(generate_settings(1, 300))
        ]
        rho = linear_inversion(results)
        delta = rho - rho0.elements
        trace_distance = 0.5 * np.abs(np.linalg.eigvalsh(delta)).sum()
        assert trace_distance < 0.15

    def test_missing_settings_rejected(self):
        results = exact_results(DensityMatrix.from_bits("0"))[:2]
        with pytest.raises(ValueError, match="missing settings"):
            linear_inversion(results)

    def test_duplicate_setting_rejected(self):
        results = exact_results(DensityMatrix.from_bits("0"))
        with pytest.raises(ValueError, match="duplicate"):
            linear_inversion(results + results[:1])

    def test_identity_expectation_is_one(self):
        expectations = pauli_expectations(exact_results(DensityMatrix.from_bits("00")))
        assert expectations["II"] == 1.0
        assert expectations["ZZ"] == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_reconstruction_consistency_random_circuits(self, n):
        rng = np.random.default_rng(n)
        for _ in range(3):
            state = StateVector.zero(n)
            for _ in range(12):
                mat = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
                q, r = np.linalg.qr(mat)
                u = Unitary(q * (np.diag(r) / np.abs(np.diag(r))))
                state = apply_unitary(state, u, [int(rng.integers(n))])
            rho = DensityMatrix.from_statevector(state)
            rec = linear_inversion(exact_results(rho))
            assert np.abs(rec - rho.elements).max() < 1e-9


class TestProjectToPhysical:
    def test_physical_input_unchanged(self):
        rho = DensityMatrix(np.array([[0.6, 0.2], [0.2, 0.4]], dtype=complex))
        out = project_to_physical(rho.elements)
        assert np.abs(out.elements - rho.elements).max() < 1e-12

    def test_two_level_redistribution(self):
        # deficit of the negative eigenvalue moves onto the positive one
        out = project_to_physical(np.diag([1.2, -0.2]).astype(complex))
        assert np.abs(out.elements - np.diag([1.0, 0.0])).max() < 1e-12

    def test_four_level_redistribution(self):
        # zero the two negatives (-0.2 total), subtract 0.1 from each positive
        out = project_to_physical(np.diag([0.7, 0.5, -0.1, -0.1]).astype(complex))
        eigs = np.sort(np.linalg.eigvalsh(out.elements))[::-1]
        assert np.abs(eigs - np.array([0.6, 0.4, 0.0, 0.0])).max() < 1e-12

    def test_idempotent_on_random_physical_matrices(self):
        rng = np.random.default_rng(8)
        for _ in range(200):
            dim = int(rng.choice([2, 4]))
            mat = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
            rho = mat @ mat.conj().T
            rho /= np.trace(rho).real
            out = project_to_physical(rho)
            assert np.abs(out.elements - rho).max() < 1e-12

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError, match="Hermitian"):
            project_to_physical(np.array([[1.0, 1.0], [0.0, 0.0]]))

    def test_projection_is_closest_among_random_candidates(self):
        rng = np.random.default_rng(21)
        raw = np.diag([0.9, 0.4, -0.1, -0.2]).astype(complex)
        projected = project_to_physical(raw)
        best = np.linalg.norm(raw - projected.elements)
        for _ in range(10000):
            mat = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            candidate = mat @ mat.conj().T
            candidate /= np.trace(candidate).real
            assert np.linalg.norm(raw - candidate) >= best - 1e-12


class TestStateFidelity:
    def test_self_fidelity_pure(self):
        rho = DensityMatrix.from_bits("101")
        assert state_fidelity(rho, rho) == pytest.approx(1.0, abs=1e-12)

    def test_pure_vs_maximally_mixed(self):
        rho = DensityMatrix.from_bits("111111")
        mixed = DensityMatrix.maximally_mixed(6)
        assert state_fidelity(rho, mixed) == pytest.approx(1.0 / 8.0, abs=1e-12)

    def test_symmetric_for_pure_vs_mixed(self):
        pure = DensityMatrix.from_bits("01")
        mixed = DensityMatrix(np.diag([0.4, 0.3, 0.2, 0.1]).astype(complex))
        assert state_fidelity(pure, mixed) == pytest.approx(
            state_fidelity(mixed, pure), abs=1e-12
        )

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension"):
            state_fidelity(DensityMatrix.from_bits("0"), DensityMatrix.from_bits("00"))


class TestRunQst:
    def test_small_ideal_round_trip(self):
        result = run_qst(build_bv_circuit("11"), None, 900, seed=3)
        assert result.fidelity >= 0.97
        assert result.num_settings == 9
        assert result.total_shots == 900

    def test_four_qubit_ideal_round_trip(self):
        # projection loss at ~46 shots/setting caps fidelity near 0.95
        result = run_qst(build_bv_circuit("1111"), None, 3696, seed=5)
        assert result.fidelity >= 0.93

    def test_four_qubit_fidelity_approaches_one_with_budget(self):
        result = run_qst(build_bv_circuit("1111"), None, 3696 * 81, seed=5)
        assert result.fidelity >= 0.99

    def test_register_too_large(self):
        with pytest.raises(RegisterTooLargeError):
            run_qst(build_bv_circuit("1111111"), None, 3**7, seed=0)

    def test_noisy_fidelity_orders_by_density(self):
        snap = uniform_snapshot(7)
        model = build_noise_model(snap)
        dense = run_qst(build_bv_circuit("111111"), model, 21000, seed=9).fidelity
        sparse = run_qst(build_bv_circuit("000001"), model, 21000, seed=9).fidelity
        assert dense < sparse

    def test_result_serialization(self):
        result = run_qst(build_bv_circuit("11"), None, 900, seed=3)
        payload = result.to_dict()
        assert payload["num_qubits"] == 2
        assert len(payload["rho_physical"]) == 16
        assert payload["fidelity"] == result.fidelity

    def test_shot_noise_scaling(self):
        # infidelity spread across seeds must shrink as shots grow
        spreads = []
        for shots in (90, 900, 9000):
            fids = [
                run_qst(build_bv_circuit("11"), None, shots, seed=s).fidelity
                for s in range(8)
            ]
            spreads.append(np.std([1.0 - f for f in fids]))
        assert spreads[0] > spreads[1] > spreads[2]

    def test_fidelity_bounds(self):
        for seed in range(4):
            fid = run_qst(build_bv_circuit("101"), None, 2700, seed=seed).fidelity
            assert 0.0 <= fid <= 1.0 + 1e-9


def test_setting_distribution_matches_inline_rotations():
    rho = final_density_matrix(build_bv_circuit("10"))
    for bases, expected in exact_results(rho):
        dist = setting_distribution(rho, bases)
        for key, p in expected.items():
            assert dist.get(key, 0.0) == pytest.approx(p, abs=1e-12)
