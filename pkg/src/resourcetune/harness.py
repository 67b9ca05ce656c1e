"""Experiment orchestration: runs, comparisons across algorithms, report files."""
from __future__ import annotations

import csv
import json
import logging
import math
from collections import defaultdict
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .algorithms import ALGORITHMS, CycleTiming, make_strategy
from .evaluator import evaluate
from .model import Instance, TuningPlan

log = logging.getLogger(__name__)

CSV_COLUMNS = (
    "instance_id", "algorithm", "scenario_u", "scenario_p", "plans", "objective",
    "lp_time_mean", "plan_time_mean", "total_time_mean", "total_time_max", "seed",
)
TIMING_COLUMNS = ("lp_time_mean", "plan_time_mean", "total_time_mean", "total_time_max")


@dataclass
class RunRecord:
    instance_id: str
    algorithm: str
    plans: int
    objective: float
    timings: list[CycleTiming]
    seed: int | None = None
    algorithm_seed: int | None = None
    scenario_u: float | None = None
    scenario_p: float | None = None
    diagnostics: list[str] = field(default_factory=list)
    plan_sequence: list[TuningPlan] = field(default_factory=list, repr=False)

    @property
    def overruns(self) -> int:
        return sum(t.overrun for t in self.timings)

    def row(self) -> dict:
        lp = [t.lp_seconds for t in self.timings]
        pl = [t.plan_seconds for t in self.timings]
        tot = [t.total_seconds for t in self.timings]
        return {
            "instance_id": self.instance_id,
            "algorithm": self.algorithm,
            "scenario_u": self.scenario_u,
            "scenario_p": self.scenario_p,
            "plans": self.plans,
            "objective": repr(self.objective),
            "lp_time_mean": float(np.mean(lp)),
            "plan_time_mean": float(np.mean(pl)),
            "total_time_mean": float(np.mean(tot)),
            "total_time_max": float(np.max(tot)),
            "seed": self.seed,
        }


def run(instance: Instance, algorithm: str, plan_count: int = 100, budget: float = 2.0,
        instance_id: str | None = None, **options) -> RunRecord:
    """Drive ``algorithm`` for ``plan_count`` cycles and score the whole sequence."""
    if plan_count < 1:
        raise ValueError("plan_count must be at least 1; the objective is undefined for no plans")
    strategy = make_strategy(algorithm, instance, budget_seconds=budget, **options)
    plans = [strategy.next_plan() for _ in range(plan_count)]
    report = evaluate(plans, instance.tracks, instance.surveys)
    meta = instance.meta
    rec = RunRecord(
        instance_id=instance_id or str(meta.get("id", meta.get("seed", ""))),
        algorithm=algorithm,
        plans=plan_count,
        objective=report.total,
        timings=list(strategy.timings),
        seed=meta.get("seed"),
        algorithm_seed=options.get("seed"),
        scenario_u=meta.get("utilization"),
        scenario_p=meta.get("track_proportion"),
        diagnostics=list(strategy.diagnostics),
        plan_sequence=plans,
    )
    if rec.overruns:
        log.warning("%s on %s overran the %.2fs budget in %d of %d cycles",
                    algorithm, rec.instance_id, budget, rec.overruns, plan_count)
    return rec


def quantile(values: Sequence[float], q: float) -> float:
    """Linear-interpolation quantile (R type 7) that tolerates infinities."""
    xs = sorted(values)
    h = (len(xs) - 1) * q
    lo = math.floor(h)
    frac = h - lo
    if frac == 0 or xs[lo] == xs[lo + 1]:
        return xs[lo]
    return xs[lo] + (xs[lo + 1] - xs[lo]) * frac


def normalized_objectives(objectives: dict) -> tuple[dict, list]:
    """Per-algorithm objective over the instance's best, and the winners.

    With a best of zero, algorithms also at zero get 1 and the rest infinity.
    """
    best = min(objectives.values())
    winners = [a for a, v in objectives.items() if v == best]
    if best > 0:
        norm = {a: v / best for a, v in objectives.items()}
    else:
        norm = {a: 1.0 if v == 0 else math.inf for a, v in objectives.items()}
    return norm, winners


@dataclass
class AlgorithmSummary:
    mean: float
    sd: float
    wins: int
    tied_wins: int
    q1: float
    q2: float
    q3: float


INF_SENTINEL = "\u221e"


def _finite(x):
    if isinstance(x, float) and math.isinf(x):
        return INF_SENTINEL
    if isinstance(x, dict):
        return {k: _finite(v) for k, v in x.items()}
    if isinstance(x, list):
        return [_finite(v) for v in x]
    return x


@dataclass
class ComparisonTable:
    scenarios: dict = field(default_factory=dict)
    per_instance: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return _finite({
            "scenarios": [
                {"utilization": u, "track_proportion": p,
                 "algorithms": {a: asdict(s) for a, s in algs.items()}}
                for (u, p), algs in self.scenarios.items()
            ],
            "per_instance": self.per_instance,
        })


def tabulate(records: Sequence[RunRecord]) -> ComparisonTable:
    by_instance: dict = defaultdict(dict)
    scenario_of = {}
    for r in records:
        by_instance[r.instance_id][r.algorithm] = r.objective
        scenario_of[r.instance_id] = (r.scenario_u, r.scenario_p)
    table = ComparisonTable()
    grouped: dict = defaultdict(lambda: defaultdict(lambda: {"obj": [], "norm": [], "wins": 0, "ties": 0}))
    for iid, objs in by_instance.items():
        norm, winners = normalized_objectives(objs)
        tie = len(winners) > 1
        table.per_instance.append({
            "instance_id": iid, "objective": objs, "normalized": norm, "winners": winners, "tie": tie,
        })
        for a, v in objs.items():
            g = grouped[scenario_of[iid]][a]
            g["obj"].append(v)
            g["norm"].append(norm[a])
            if a in winners:
                g["wins"] += 1
                g["ties"] += tie
    for key, algs in grouped.items():
        table.scenarios[key] = {
            a: AlgorithmSummary(
                mean=float(np.mean(g["obj"])),
                sd=float(np.std(g["obj"], ddof=1)) if len(g["obj"]) > 1 else 0.0,
                wins=g["wins"],
                tied_wins=g["ties"],
                q1=quantile(g["norm"], 0.25),
                q2=quantile(g["norm"], 0.5),
                q3=quantile(g["norm"], 0.75),
            )
            for a, g in algs.items()
        }
    return table


def compare(instances: Sequence[tuple[str, Instance]], algorithms: Sequence[str], plan_count: int = 100,
            budget: float = 2.0, options: dict | None = None) -> tuple[list[RunRecord], ComparisonTable]:
    """Run every algorithm on every (id, instance) pair and tabulate wins and Θ*."""
    if not instances:
        raise ValueError("compare needs at least one instance")
    if len(algorithms) < 2:
        raise ValueError("compare needs at least two algorithms")
    for a in algorithms:
        if a not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {a!r}")
    options = options or {}
    records = [
        run(inst, a, plan_count, budget, instance_id=iid, **options.get(a, {}))
        for iid, inst in instances
        for a in algorithms
    ]
    return records, tabulate(records)


def write_csv(records: Sequence[RunRecord], path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in records:
            w.writerow(r.row())
    return path


def _plot(table: ComparisonTable, records: Sequence[RunRecord], out: Path) -> list[Path]:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    paths = []
    for (u, p) in table.scenarios:
        recs = [r for r in records if (r.scenario_u, r.scenario_p) == (u, p)]
        algs = sorted({r.algorithm for r in recs})
        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.boxplot([[r.objective for r in recs if r.algorithm == a] for a in algs])
        ax.set_xticks(range(1, len(algs) + 1), algs)
        ax.set_ylabel("objective")
        ax.set_title(f"U = {u}, p = {p}")
        fig.tight_layout()
        path = out / f"objective_u{u}_p{p}.svg"
        fig.savefig(path)
        plt.close(fig)
        paths.append(path)
    return paths


def emit_report(records: Sequence[RunRecord], out_dir, formats: Sequence[str] = ("csv", "json")) -> list[Path]:
    """Write ``runs.csv``, ``summary.json`` and, with ``plots``, one SVG per scenario."""
    if not records:
        raise ValueError("no run records to report")
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create report directory {out}: {exc}") from exc
    table = tabulate(records)
    written = []
    if "csv" in formats:
        written.append(write_csv(records, out / "runs.csv"))
    if "json" in formats:
        path = out / "summary.json"
        path.write_text(json.dumps(table.to_dict(), indent=1, default=str, ensure_ascii=False) + "\n")
        written.append(path)
    if "plots" in formats:
        written += _plot(table, records, out)
    return written


def save_plans(plans: Sequence[TuningPlan], path) -> Path:
    path = Path(path)
    path.write_text(json.dumps({"plans": [p.to_json() for p in plans]}) + "\n")
    return path


def load_plans(spec, path) -> list[TuningPlan]:
    data = json.loads(Path(path).read_text())
    return [TuningPlan.from_json(spec, grid) for grid in data["plans"]]
