"""Pattern-dependent degradation under a calibration-derived noise model.

Builds a uniform calibration snapshot (T1/T2, per-gate depolarizing error,
readout confusion), emulates the full register as a density matrix, and
shows how success probability falls and the Hellinger distance grows as
the secret string gets denser.  The error profile is summarized by
Hamming distance from the correct answer.
"""

from bvbench import (
    ExecutionConfig,
    ExecutionMode,
    build_bv_circuit,
    build_noise_model,
    compute_metrics,
    hamming_error_profile,
    run_noisy,
    uniform_snapshot,
)

PATTERNS = ["000000", "000001", "101010", "011011", "011101", "111111"]

snapshot = uniform_snapshot(
    7,
    t1=250e-6,
    t2=150e-6,
    error_1q=3e-4,
    error_2q=8e-3,
    readout_error=0.03,
)
model = build_noise_model(snapshot)

print(f"{'pattern':>8}  {'density':>7}  {'success %':>9}  {'hellinger':>9}")
results = {}
for i, bits in enumerate(PATTERNS):
    counts = run_noisy(
        build_bv_circuit(bits),
        model,
        ExecutionConfig(shots=20000, seed=100 + i, mode=ExecutionMode.NOISY_DENSITY),
    )
    report = compute_metrics(counts, bits)
    results[bits] = (counts, report)
    density = bits.count("1") / len(bits)
    print(f"{bits:>8}  {density:>7.3f}  {report.success_probability:>9.1f}  {report.hellinger:>9.3f}")

print("\nerror profile for 000000 (probability mass by Hamming distance):")
profile = hamming_error_profile(results["000000"][0], "000000")
for distance, mass in profile.items():
    bar = "#" * max(1, round(60 * mass)) if mass > 0.001 else ""
    print(f"  d={distance}: {mass:.4f} {bar}")
print("single-bit flips dominate the error mass, as expected for local noise")
