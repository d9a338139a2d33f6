"""The full 11-pattern benchmark: ideal baseline plus noisy emulation.

Runs every built-in test pattern under both simulation scenarios from a
manifest, writes results.csv / results.json / plotdata TSVs, and prints
the table.  Tomography fidelities are attached for registers small enough
to reconstruct (<= 6 qubits).
"""

import json
from pathlib import Path

from bvbench import Manifest, OracleStyle, Scenario, run_suite, save_snapshot, uniform_snapshot

out_dir = Path(__file__).parent / "output" / "benchmark"
out_dir.mkdir(parents=True, exist_ok=True)

snapshot_path = out_dir / "snapshot.json"
save_snapshot(uniform_snapshot(11), snapshot_path)

manifest = Manifest(
    shots=20000,
    seed=2024,
    oracle=OracleStyle.CNOT,
    scenarios=(Scenario.IDEAL, Scenario.NOISY),
    snapshot_path=str(snapshot_path),
    qst_shots=21000,
)

results, written = run_suite(manifest, out_dir)
print("wrote:")
for path in written:
    print(f"  {path}")

print("\nresults.csv:")
print((out_dir / "results.csv").read_text())

payload = json.loads((out_dir / "results.json").read_text())
print("aggregates:")
for key, value in payload["aggregates"].items():
    print(f"  {key}: {value}")
