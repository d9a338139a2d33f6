"""Recovering a hidden bitstring in one oracle query, ideally.

Walks through the core pipeline: build the circuit for a secret string,
inspect its exact output distribution, sample counts with a fixed seed,
and check that the hardware-native ECR oracle implements the same unitary
as the textbook CNOT oracle.
"""

import numpy as np

from bvbench import (
    ExecutionConfig,
    OracleStyle,
    build_bv_circuit,
    build_oracle_circuit,
    circuit_unitary,
    exact_distribution,
    run_ideal,
)

SECRET = "101011"

circuit = build_bv_circuit(SECRET)
print(f"secret: {SECRET}")
print(f"circuit: {circuit.num_data_qubits} data qubits + 1 ancilla, {len(circuit.gates)} gates")

dist = exact_distribution(circuit)
print("\nexact output distribution (one oracle query):")
for outcome, p in dist.items():
    print(f"  {outcome}: {p:.12f}")

counts = run_ideal(circuit, ExecutionConfig(shots=20000, seed=7))
print(f"\nsampled 20000 shots (seed 7): {dict(counts.counts)}")
print(f"most frequent outcome: {counts.most_frequent()}")

# The ECR-native oracle is the same operation up to a tracked global phase.
u_cnot = circuit_unitary(build_oracle_circuit(SECRET, OracleStyle.CNOT))
u_ecr = circuit_unitary(build_oracle_circuit(SECRET, OracleStyle.ECR))
deviation = np.abs(u_cnot.elements - u_ecr.elements).max()
print(f"\nCNOT-style vs ECR-style oracle unitary, max |difference|: {deviation:.3e}")

ecr_dist = exact_distribution(build_bv_circuit(SECRET, OracleStyle.ECR))
print(f"ECR-style circuit still recovers the secret: {max(ecr_dist, key=ecr_dist.get)}")
