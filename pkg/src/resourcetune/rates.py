"""Goal insertion rates from a covering LP, and the discounted history that feeds it."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from .model import (
    Configuration,
    ObservationIndex,
    TuningPlan,
    observed_subsurveys_in_step,
    observed_tracks_in_step,
    subsurvey_key,
    track_key,
)

OPTIMAL = "optimal"
FALLBACK = "infeasible-fallback"


@dataclass(frozen=True)
class HistoryState:
    """Discounted realized-rate sum per task key, after ``plan_index`` plans."""

    discount: float
    sums: dict = field(default_factory=dict)
    plan_index: int = 0

    def __post_init__(self):
        if not 0.0 < self.discount < 1.0:
            raise ValueError(f"discount must lie in (0, 1), got {self.discount}")


def geometric_sum(discount: float, n: int) -> float:
    """1 + d + ... + d**(n-1), stable for d close to 1."""
    if n <= 0:
        return 0.0
    return math.expm1(n * math.log(discount)) / (discount - 1.0)


def current_rates(history: HistoryState, goals: dict) -> dict:
    """Observation rate each task should get in the next plan, clamped to [0, 1]."""
    j = history.plan_index
    if j == 0:
        return dict(goals)
    scale = geometric_sum(history.discount, j + 1)
    g = history.discount
    out = {}
    for key, goal in goals.items():
        raw = scale * goal - g * history.sums.get(key, 0.0)
        out[key] = min(1.0, max(0.0, raw))
    return out


def realized_task_rates(plan: TuningPlan, index: ObservationIndex) -> Counter:
    """Fraction of steps each task key is observed in ``plan``."""
    counts: Counter = Counter()
    for t in range(plan.steps):
        counts.update(map(track_key, observed_tracks_in_step(plan, t, index)))
        counts.update(map(subsurvey_key, observed_subsurveys_in_step(plan, t, index)))
    return Counter({k: v / plan.steps for k, v in counts.items()})


def update_history(history: HistoryState, plan: TuningPlan, index: ObservationIndex,
                   keys: Sequence | None = None) -> HistoryState:
    """H <- discount * H + R for every task, R being this plan's realized rate."""
    realized = realized_task_rates(plan, index)
    keys = set(history.sums) | set(realized) if keys is None else keys
    g = history.discount
    sums = {k: g * history.sums.get(k, 0.0) + realized.get(k, 0.0) for k in keys}
    return HistoryState(history.discount, sums, history.plan_index + 1)


@dataclass
class RateSolution:
    rates: dict
    objective: float
    status: str = OPTIMAL
    uncovered: list = field(default_factory=list)

    def rate(self, c: Configuration) -> float:
        return self.rates.get(c, 0.0)

    @property
    def nonzero(self) -> int:
        return sum(1 for r in self.rates.values() if r > 0)


class RateLP:
    """The covering LP over a fixed configuration set; only the demands vary per cycle.

    minimise   sum_c w_c r_c
    subject to sum_{c observes x} r_c >= cur_x   for every track and sub-survey x
               r_c >= 0
    """

    def __init__(self, configs: Sequence[Configuration], task_keys: Sequence | None = None):
        self.configs = list(configs)
        if task_keys is None:
            task_keys = sorted({k for c in self.configs for k in c.tasks}, key=repr)
        self.task_keys = list(task_keys)
        row_of = {k: i for i, k in enumerate(self.task_keys)}
        rows, cols = [], []
        for j, c in enumerate(self.configs):
            for k in c.tasks:
                i = row_of.get(k)
                if i is not None:
                    rows.append(i)
                    cols.append(j)
        self.matrix = sparse.csr_matrix(
            (np.ones(len(rows)), (rows, cols)), shape=(len(self.task_keys), len(self.configs))
        )
        self.weights = np.array([c.weight for c in self.configs], dtype=float)
        self.covered = np.asarray(self.matrix.sum(axis=1)).ravel() > 0

    def solve(self, cur: dict) -> RateSolution:
        demand = np.array([cur.get(k, 0.0) for k in self.task_keys])
        live = demand > 0
        uncovered = [k for k, d, ok in zip(self.task_keys, demand, self.covered) if d > 0 and not ok]
        keep = live & self.covered
        status = FALLBACK if uncovered else OPTIMAL
        if not keep.any():
            return RateSolution({c: 0.0 for c in self.configs}, 0.0, status, uncovered)
        res = linprog(
            self.weights,
            A_ub=-self.matrix[keep],
            b_ub=-demand[keep],
            bounds=(0, None),
            method="highs",
            options={"primal_feasibility_tolerance": 1e-9, "dual_feasibility_tolerance": 1e-9},
        )
        if res.status != 0:
            raise RuntimeError(f"rate LP failed: {res.message}")
        x = np.maximum(res.x, 0.0)
        return RateSolution(dict(zip(self.configs, x.tolist())), float(self.weights @ x), status, uncovered)


def build_and_solve_rate_lp(configs: Sequence[Configuration], cur: dict) -> RateSolution:
    """One-shot solve; ``cur`` maps tagged task keys to demanded rates."""
    return RateLP(configs, list(cur)).solve(cur)
