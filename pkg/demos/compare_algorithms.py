"""
ResourceTune against the baselines
==================================

A heavily loaded scenario (U = 2, mostly tracks). Each algorithm emits a
sequence of plans; the objective is scored over the whole sequence and
normalised by the best algorithm on each instance. The genetic algorithm
is capped at a few generations so the script finishes quickly.
"""

import tempfile

from resourcetune.harness import compare, emit_report
from resourcetune.scenario import ScenarioParams, generate_instance

instances = [(f"seed{s}", generate_instance(ScenarioParams(2.0, 0.75, seed=s))) for s in range(3)]
records, table = compare(
    instances,
    ["resourcetune", "greedy", "ga"],
    plan_count=10,
    options={"ga": {"max_generations": 20}},
)

for row in table.per_instance:
    objs = ", ".join(f"{a} {v:.3f}" for a, v in row["objective"].items())
    print(f"{row['instance_id']}: {objs}  -> {row['winners']}")

for (u, p), algs in table.scenarios.items():
    for name, s in algs.items():
        print(f"U={u} p={p} {name:>12}: mean {s.mean:.3f}, wins {s.wins}, median ratio {s.q2:.3f}")

out = tempfile.mkdtemp(prefix="resourcetune-")
for path in emit_report(records, out, ("csv", "json", "plots")):
    print("wrote", path)
