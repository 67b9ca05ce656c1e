from __future__ import annotations

import time
from dataclasses import dataclass

from ..model import ObservationIndex, goals_of
from ..planner import construct_plan
from ..preprocess import PreprocessParams, dedup_unique_observation_sets, preprocess
from ..rates import FALLBACK, HistoryState, RateLP, current_rates, update_history
from .base import CycleTiming, Strategy


@dataclass
class ResourceTune(Strategy):
    """Preprocess once, then per cycle: current rates, covering LP, plan, history update."""

    split_size: float = 5.0
    discount: float = 0.99999
    variant: str = "left_right"
    name = "resourcetune"

    def __post_init__(self):
        inst = self.instance
        self.pre = preprocess(
            inst.tracks, inst.surveys, inst.spec, PreprocessParams(self.split_size, self.variant)
        )
        self.configs = dedup_unique_observation_sets(self.pre.configurations)
        self.goals = goals_of(inst.tracks, self.pre.subsurveys)
        self.keys = list(self.goals)
        self.lp = RateLP(self.configs, self.keys)
        self.index = ObservationIndex(inst.tracks, self.pre.subsurveys)
        self.history = HistoryState(self.discount, {k: 0.0 for k in self.keys})
        self.last_solution = None
        for pid in self.pre.skipped:
            self.diagnostics.append(f"no shape fits parent {pid}")

    def _cycle(self):
        timing = CycleTiming()
        t0 = time.perf_counter()
        cur = current_rates(self.history, self.goals)
        sol = self.lp.solve(cur)
        t1 = time.perf_counter()
        plan = construct_plan(self.configs, sol.rates, self.instance.spec)
        t2 = time.perf_counter()
        self.history = update_history(self.history, plan, self.index, self.keys)
        timing.lp_seconds = t1 - t0
        timing.plan_seconds = t2 - t1
        if sol.status == FALLBACK:
            self.diagnostics.append(
                f"plan {self.history.plan_index}: {len(sol.uncovered)} tasks have no covering configuration"
            )
        self.last_solution = sol
        return plan, timing
