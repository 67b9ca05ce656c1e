"""
Placing shaped bodies around an emitter
=======================================

An emitter at [500, 525] is covered by sliding each single of a shape so
that its right edge, or its left edge, touches the emitter. Centred
placement puts the emitter in the middle instead. We then compare how many
configurations each approach builds on a random instance and how much
receiver time the covering LP asks for.
"""

import statistics

from resourcetune.algorithms import ResourceTune
from resourcetune.intervals import Shape, SingleInterval
from resourcetune.model import Emitter, Track
from resourcetune.preprocess import build_centered, build_left_right
from resourcetune.rates import current_rates
from resourcetune.scenario import ScenarioParams, generate_instance

tau = Track(0, (Emitter(SingleInterval(500, 525), 100),), 0.5)
for shape in (Shape((70,)), Shape((50, 100, 100))):
    lr = [c.body for c in build_left_right([tau], [], [shape]) if c.weight == 4]
    ce = [c.body for c in build_centered([tau], [], [shape]) if c.weight == 4]
    print(shape, "left/right:", lr)
    print(shape, "centred:   ", ce)

# on generated instances the left-right set needs less receiver time
rows = {v: [] for v in ("left_right", "centered", "left_center_right")}
for seed in range(3):
    inst = generate_instance(ScenarioParams(2.0, 0.5, seed=seed))
    for variant in rows:
        rt = ResourceTune(inst, variant=variant)
        sol = rt.lp.solve(current_rates(rt.history, rt.goals))
        rows[variant].append((len(rt.pre.configurations), sol.objective, sol.nonzero))

for variant, vals in rows.items():
    built, obj, nz = (statistics.mean(x) for x in zip(*vals))
    print(f"{variant:>18}: {built:8.1f} built, LP objective {obj:7.3f}, non-zero {nz:6.1f}")
