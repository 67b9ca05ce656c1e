"""Random instances at a target expected utilization, and their JSON form.

Random streams are keyed by ``SeedSequence(seed, spawn_key=(stream, index))``
so each track's draws do not depend on how many draws other tracks made.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .intervals import SingleInterval
from .model import Emitter, Instance, Survey, SystemSpec, Track

TRACK_STREAM, SURVEY_STREAM, TRACK_GOAL_STREAM, SURVEY_GOAL_STREAM = range(4)


@dataclass(frozen=True)
class ScenarioParams:
    utilization: float
    track_proportion: float
    seed: int = 0
    track_count: int = 50
    survey_count: int = 10
    emitters_per_track: tuple[int, int] = (1, 3)
    emitter_width_range: tuple[float, float] = (1.0, 50.0)
    max_bandwidth: float = 100.0
    bandwidth_cap_prob: float = 0.75
    domain: SingleInterval = SingleInterval(10000.0, 16000.0)

    def __post_init__(self):
        if not self.utilization > 0:
            raise ValueError(f"utilization must be positive, got {self.utilization}")
        if not 0.0 <= self.track_proportion <= 1.0:
            raise ValueError(f"track proportion must lie in [0, 1], got {self.track_proportion}")
        lo, hi = self.emitters_per_track
        if not 1 <= lo <= hi:
            raise ValueError(f"bad emitter count range {self.emitters_per_track}")
        wlo, whi = self.emitter_width_range
        if not 0 < wlo <= whi <= min(self.max_bandwidth, self.domain.width):
            raise ValueError(f"bad emitter width range {self.emitter_width_range}")
        if self.track_count < 0 or self.survey_count < 1:
            raise ValueError("need a non-negative track count and at least one survey")


def _rng(seed: int, stream: int, index: int = 0) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream, index)))


def survey_receivers(survey: Survey) -> int:
    """Receivers a (100, 100, 100) body needs to cover the survey once."""
    return math.ceil(survey.band.width / 200.0)


def expected_utilization(tracks: Sequence[Track], surveys: Sequence[Survey]) -> tuple[float, float, float]:
    u_tr = 0.5 * sum(t.goal_rate for t in tracks)
    u_sv = sum(s.goal_rate * survey_receivers(s) for s in surveys) / 8.0
    return u_tr, u_sv, u_tr + u_sv


def scale_rates(raw: np.ndarray, weights: np.ndarray, target: float) -> np.ndarray:
    """Rates ``min(1, lam * raw)`` with ``sum(weights * rates) == target``.

    Rates pushed above one are pinned at one and the remaining demand is
    spread over the others with a fresh common factor until nothing new pins.
    """
    if target == 0:
        return np.zeros_like(raw)
    if target > weights.sum() * (1 + 1e-12):
        raise ValueError(f"target utilization {target} exceeds what rates of 1 can give ({weights.sum()})")
    pinned = np.zeros(raw.shape, dtype=bool)
    while True:
        rest = target - weights[pinned].sum()
        lam = rest / np.dot(weights[~pinned], raw[~pinned])
        rates = np.where(pinned, 1.0, lam * raw)
        over = (rates > 1.0) & ~pinned
        if not over.any():
            return rates
        pinned |= over


def generate_instance(params: ScenarioParams, spec: SystemSpec | None = None) -> Instance:
    spec = spec or SystemSpec(frequency_domain=params.domain)
    dom = params.domain
    wlo, whi = params.emitter_width_range
    emitter_sets = []
    for i in range(params.track_count):
        rng = _rng(params.seed, TRACK_STREAM, i)
        emitters = []
        for _ in range(int(rng.integers(params.emitters_per_track[0], params.emitters_per_track[1] + 1))):
            width = float(rng.uniform(wlo, whi))
            lo = float(rng.uniform(dom.lo, dom.hi - width))
            if rng.random() < params.bandwidth_cap_prob:
                phi = params.max_bandwidth
            else:
                phi = float(rng.uniform(width, params.max_bandwidth))
            emitters.append(Emitter(SingleInterval(lo, lo + width), phi))
        emitter_sets.append(emitters)

    cuts = np.sort(_rng(params.seed, SURVEY_STREAM).uniform(dom.lo, dom.hi, params.survey_count - 1))
    edges = [dom.lo, *map(float, cuts), dom.hi]
    bands = [SingleInterval(a, b) for a, b in zip(edges, edges[1:])]

    # (0, 1] rather than [0, 1)
    raw_t = np.array([1.0 - _rng(params.seed, TRACK_GOAL_STREAM, i).random() for i in range(params.track_count)])
    raw_s = np.array([1.0 - _rng(params.seed, SURVEY_GOAL_STREAM, i).random() for i in range(params.survey_count)])
    w_t = np.full(params.track_count, 0.5)
    w_s = np.array([math.ceil(b.width / 200.0) / 8.0 for b in bands])
    u = params.utilization
    g_t = scale_rates(raw_t, w_t, params.track_proportion * u) if params.track_count else raw_t
    g_s = scale_rates(raw_s, w_s, (1.0 - params.track_proportion) * u)

    tracks = [Track(i, tuple(em), float(g)) for i, (em, g) in enumerate(zip(emitter_sets, g_t))]
    surveys = [Survey(i, b, float(g)) for i, (b, g) in enumerate(zip(bands, g_s))]
    meta = {"seed": params.seed, "utilization": u, "track_proportion": params.track_proportion}
    return Instance(spec, tracks, surveys, meta)


def instance_to_dict(inst: Instance) -> dict:
    return {
        "spec": inst.spec.to_dict(),
        "tracks": [
            {
                "id": t.id,
                "goal_rate": t.goal_rate,
                "emitters": [
                    {"lo": e.band.lo, "hi": e.band.hi, "max_bandwidth": e.max_bandwidth} for e in t.emitters
                ],
            }
            for t in inst.tracks
        ],
        "surveys": [
            {"id": s.id, "lo": s.band.lo, "hi": s.band.hi, "goal_rate": s.goal_rate} for s in inst.surveys
        ],
        "meta": dict(inst.meta),
    }


def instance_from_dict(d: dict) -> Instance:
    spec = SystemSpec.from_dict(d["spec"])
    tracks = [
        Track(
            t["id"],
            tuple(Emitter(SingleInterval(float(e["lo"]), float(e["hi"])), float(e["max_bandwidth"]))
                  for e in t["emitters"]),
            float(t["goal_rate"]),
        )
        for t in d["tracks"]
    ]
    surveys = [
        Survey(s["id"], SingleInterval(float(s["lo"]), float(s["hi"])), float(s["goal_rate"]))
        for s in d["surveys"]
    ]
    return Instance(spec, tracks, surveys, dict(d.get("meta", {})))


def save_instance(inst: Instance, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(instance_to_dict(inst), indent=1) + "\n")
    return path


def load_instance(path) -> Instance:
    return instance_from_dict(json.loads(Path(path).read_text()))
