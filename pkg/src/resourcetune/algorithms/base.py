"""Shared surface of the plan-producing strategies."""
from __future__ import annotations

import time
from dataclasses import dataclass, field

from ..model import Instance, TuningPlan


@dataclass
class CycleTiming:
    lp_seconds: float = 0.0
    plan_seconds: float = 0.0
    total_seconds: float = 0.0
    overrun: bool = False


@dataclass
class Strategy:
    """One run of an algorithm on one instance; ``next_plan`` emits plans one by one."""

    instance: Instance
    budget_seconds: float = 2.0
    timings: list[CycleTiming] = field(default_factory=list, init=False)
    diagnostics: list[str] = field(default_factory=list, init=False)
    name = "strategy"

    def _cycle(self) -> tuple[TuningPlan, CycleTiming]:
        raise NotImplementedError

    def next_plan(self) -> TuningPlan:
        start = time.perf_counter()
        plan, timing = self._cycle()
        timing.total_seconds = time.perf_counter() - start
        timing.overrun = timing.total_seconds > self.budget_seconds
        self.timings.append(timing)
        return plan
