"""
A fully observing tuning plan
=============================

Three tracks and three surveys, one ten-step plan on four nodes with two
receivers each. The plan observes every task at its goal rate, so the
objective is zero.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from conftest import worked_plan, worked_tasks  # noqa: E402
from resourcetune.evaluator import evaluate  # noqa: E402
from resourcetune.model import track_observed_in_step  # noqa: E402

tracks, surveys = worked_tasks()
plan = worked_plan()

# which steps see each track: a body shared by all four nodes must contain
# one of the track's emitters in a band no wider than the emitter's cap
for t in tracks:
    steps = [s + 1 for s in range(plan.steps) if track_observed_in_step(plan, s, t)]
    print(f"track {t.id} (goal {t.goal_rate}): steps {steps}")

# surveys only need some receiver, on any node, covering each frequency
for s in (0, 4):
    print(f"step {s + 1} coverage: {plan.coverage(s)}")

report = evaluate([plan], tracks, surveys)
print("objective:", report.total)
