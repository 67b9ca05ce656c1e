"""Tuning-plan construction from configurations and their goal insertion rates."""
from __future__ import annotations

import heapq
import itertools
from typing import Mapping, Sequence

from .model import Configuration, Position, SystemSpec, TuningPlan

# Guards the re-enqueue test against LP round-off (0.3 vs 0.30000000000000004).
RATE_SLACK = 1e-9


def step_task_sets(plan: TuningPlan) -> list[set]:
    return [set().union(*(c.tasks for c in plan.configurations_at(t))) for t in range(plan.steps)]


def candidate_positions(plan: TuningPlan, c: Configuration, no_fragmentation: bool, step_tasks) -> list[Position]:
    spec = plan.spec
    out = []
    for t in range(plan.steps):
        if step_tasks[t] & c.tasks:
            continue
        free = [plan.free_count(n, t) for n in range(spec.node_count)]
        low = min(free)
        if c.weight == 1:
            for n in range(spec.node_count):
                if no_fragmentation and free[n] <= low:
                    # taking a cell on a least-free node lowers this step's minimum
                    continue
                for r in range(spec.receivers_per_node):
                    if plan.cells[n][r][t] is None:
                        out.append(Position(t, ((n, r),)))
        else:
            if low == 0 or no_fragmentation:
                # a weight-4 insertion always lowers the step minimum by one
                continue
            choices = [
                [(n, r) for r in range(spec.receivers_per_node) if plan.cells[n][r][t] is None]
                for n in range(spec.node_count)
            ]
            out.extend(Position(t, cells) for cells in itertools.product(*choices))
    return out


def feasible_positions(plan: TuningPlan, c: Configuration, enforce_no_fragmentation: bool) -> list[Position]:
    """Empty positions for ``c`` that repeat no observed task at their step.

    With ``enforce_no_fragmentation`` only positions that leave the plan
    cohesion unchanged are kept.
    """
    return candidate_positions(plan, c, enforce_no_fragmentation, step_task_sets(plan))


def select_position(positions: Sequence[Position], plan: TuningPlan) -> Position:
    """Most loaded step first, then lowest step, node and receiver indices."""
    if not positions:
        raise ValueError("no position to select from")
    return min(positions, key=lambda q: (plan.empty_cells_at(q.step), q.step, q.cells))


def construct_plan(configs: Sequence[Configuration], rates: Mapping[Configuration, float],
                   spec: SystemSpec) -> TuningPlan:
    """Fill one plan, least-inserted configuration first.

    Queue order is (inserted fraction, -weight, -rate, construction order).
    Each popped configuration is tried with both the overlap and fragmentation
    filters, then with the overlap filter alone; it returns to the queue only
    while its inserted fraction is below its rate and is dropped if neither
    attempt finds a position.
    """
    plan = TuningPlan(spec)
    T = spec.steps_per_plan
    step_tasks = [set() for _ in range(T)]
    inserted = [0] * len(configs)
    heap = []
    for i, c in enumerate(configs):
        r = rates.get(c, 0.0)
        if r > 0:
            heap.append((0, -c.weight, -r, i))
    heapq.heapify(heap)
    while heap:
        _, negw, negr, i = heapq.heappop(heap)
        c = configs[i]
        positions = (
            candidate_positions(plan, c, True, step_tasks)
            or candidate_positions(plan, c, False, step_tasks)
        )
        if not positions:
            continue
        q = select_position(positions, plan)
        plan.insert(c, q)
        step_tasks[q.step] |= c.tasks
        inserted[i] += 1
        if -negr > inserted[i] / T + RATE_SLACK:
            heapq.heappush(heap, (inserted[i], negw, negr, i))
    return plan
