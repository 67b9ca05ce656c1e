"""Objective of a plan sequence: per-task shortfall against the goal rates.

Track terms clamp the goal minus the mean realized rate at zero. Survey terms
integrate that clamped shortfall across the survey band; the coverage count is
piecewise constant between coverage endpoints, so the integral is an exact sum
over elementary segments.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .model import Survey, Track, TuningPlan, track_observed_in_step


@dataclass
class EvaluationReport:
    total: float
    per_track: dict
    per_survey: dict
    realized_track_rates: dict = field(default_factory=dict)
    plan_count: int = 0


def realized_track_rate(plan: TuningPlan, track: Track) -> float:
    hits = sum(track_observed_in_step(plan, t, track) for t in range(plan.steps))
    return hits / plan.steps


def _coverage_arrays(plan: TuningPlan, t: int) -> tuple[np.ndarray, np.ndarray]:
    cov = plan.coverage(t)
    return (np.array([s.lo for s in cov.singles]), np.array([s.hi for s in cov.singles]))


def _covered(los: np.ndarray, his: np.ndarray, f: np.ndarray) -> np.ndarray:
    if los.size == 0:
        return np.zeros(f.shape, dtype=bool)
    i = np.searchsorted(los, f, side="right") - 1
    ok = i >= 0
    out = np.zeros(f.shape, dtype=bool)
    out[ok] = f[ok] <= his[i[ok]]
    return out


def mean_frequency_rate(plans: Sequence[TuningPlan], f: np.ndarray, coverages=None) -> np.ndarray:
    """Average over plans of the fraction of steps each frequency in ``f`` is covered."""
    if coverages is None:
        coverages = [[_coverage_arrays(p, t) for t in range(p.steps)] for p in plans]
    acc = np.zeros(f.shape)
    for p, cov in zip(plans, coverages):
        hits = np.zeros(f.shape)
        for los, his in cov:
            hits += _covered(los, his, f)
        acc += hits / p.steps
    return acc / len(plans)


def survey_deficit(plans: Sequence[TuningPlan], survey: Survey, coverages=None) -> float:
    if not plans:
        raise ValueError("survey deficit needs at least one plan")
    if coverages is None:
        coverages = [[_coverage_arrays(p, t) for t in range(p.steps)] for p in plans]
    a, b = survey.band.lo, survey.band.hi
    cuts = {a, b}
    for cov in coverages:
        for los, his in cov:
            cuts.update(x for x in los if a < x < b)
            cuts.update(x for x in his if a < x < b)
    edges = np.array(sorted(cuts))
    mids = 0.5 * (edges[:-1] + edges[1:])
    rate = mean_frequency_rate(plans, mids, coverages)
    short = np.maximum(0.0, survey.goal_rate - rate)
    return float(np.dot(short, np.diff(edges)) / (b - a))


def evaluate(plans: Sequence[TuningPlan], tracks: Sequence[Track], surveys: Sequence[Survey]) -> EvaluationReport:
    if not plans:
        raise ValueError("the objective is undefined for an empty plan sequence")
    realized = {}
    per_track = {}
    for tr in tracks:
        rates = [realized_track_rate(p, tr) for p in plans]
        for j, r in enumerate(rates):
            realized[(tr.id, j)] = r
        per_track[tr.id] = max(0.0, tr.goal_rate - sum(rates) / len(plans))
    coverages = [[_coverage_arrays(p, t) for t in range(p.steps)] for p in plans]
    per_survey = {s.id: survey_deficit(plans, s, coverages) for s in surveys}
    total = sum(per_track.values()) + sum(per_survey.values())
    return EvaluationReport(total, per_track, per_survey, realized, len(plans))
