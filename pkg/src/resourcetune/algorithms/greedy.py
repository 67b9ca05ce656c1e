from __future__ import annotations

import time
from dataclasses import dataclass

from ..model import TuningPlan, goals_of
from ..planner import candidate_positions, select_position
from ..preprocess import build_baseline_configurations
from .base import CycleTiming, Strategy


@dataclass
class Greedy(Strategy):
    """Time-balance greedy: insert the configuration with the largest unmet balance.

    Priority of a configuration is the sum of the positive balances of the tasks
    it observes. Equal priorities prefer the lighter configuration, then the
    earlier one. An insertion charges 1/|T| to each observed task; after each
    plan every balance is credited with its goal rate.
    """

    name = "greedy"

    def __post_init__(self):
        inst = self.instance
        self.configs, self.subsurveys = build_baseline_configurations(inst.tracks, inst.surveys, inst.spec)
        self.goals = goals_of(inst.tracks, self.subsurveys)
        self.balance = dict(self.goals)

    def priority(self, c) -> float:
        return sum(max(0.0, self.balance.get(k, 0.0)) for k in c.tasks)

    def _cycle(self):
        t0 = time.perf_counter()
        spec = self.instance.spec
        plan = TuningPlan(spec)
        step_tasks = [set() for _ in range(spec.steps_per_plan)]
        charge = 1.0 / spec.steps_per_plan
        while True:
            ranked = sorted(
                (
                    (-p, c.weight, i)
                    for i, c in enumerate(self.configs)
                    if (p := self.priority(c)) > 0
                )
            )
            for _, _, i in ranked:
                c = self.configs[i]
                positions = candidate_positions(plan, c, False, step_tasks)
                if positions:
                    q = select_position(positions, plan)
                    plan.insert(c, q)
                    step_tasks[q.step] |= c.tasks
                    for k in c.tasks:
                        self.balance[k] -= charge
                    break
            else:
                break
        for k, g in self.goals.items():
            self.balance[k] += g
        return plan, CycleTiming(plan_seconds=time.perf_counter() - t0)
