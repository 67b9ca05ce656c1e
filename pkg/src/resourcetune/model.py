"""System model: tasks, configurations, tuning plans and what they observe."""
from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Sequence

from .intervals import MultipleInterval, Shape, SingleInterval, contains, shape_of, union_all

INF = float("inf")


def experiment_shapes() -> tuple[Shape, ...]:
    """{(y) | 10 <= y <= 100 integer} plus (100, 100, 100)."""
    return tuple(Shape((float(y),)) for y in range(10, 101)) + (Shape((100.0, 100.0, 100.0)),)


@dataclass(frozen=True)
class SystemSpec:
    node_count: int = 4
    receivers_per_node: int = 2
    steps_per_plan: int = 10
    allowed_shapes: tuple[Shape, ...] = field(default_factory=experiment_shapes)
    frequency_domain: SingleInterval = SingleInterval(10000.0, 16000.0)
    plan_duration_seconds: float = 2.0

    def __post_init__(self):
        if min(self.node_count, self.receivers_per_node, self.steps_per_plan) < 1:
            raise ValueError("node, receiver and step counts must all be >= 1")
        object.__setattr__(self, "allowed_shapes", tuple(self.allowed_shapes))

    @property
    def cell_count(self) -> int:
        return self.node_count * self.receivers_per_node * self.steps_per_plan

    @cached_property
    def shape_set(self) -> frozenset[Shape]:
        return frozenset(self.allowed_shapes)

    def to_dict(self) -> dict:
        return {
            "node_count": self.node_count,
            "receivers_per_node": self.receivers_per_node,
            "steps_per_plan": self.steps_per_plan,
            "allowed_shapes": [list(s.entries) for s in self.allowed_shapes],
            "frequency_domain": [self.frequency_domain.lo, self.frequency_domain.hi],
            "plan_duration_seconds": self.plan_duration_seconds,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SystemSpec":
        return cls(
            node_count=int(d["node_count"]),
            receivers_per_node=int(d["receivers_per_node"]),
            steps_per_plan=int(d["steps_per_plan"]),
            allowed_shapes=tuple(Shape(tuple(s)) for s in d["allowed_shapes"]),
            frequency_domain=SingleInterval(*map(float, d["frequency_domain"])),
            plan_duration_seconds=float(d["plan_duration_seconds"]),
        )


@dataclass(frozen=True)
class Emitter:
    band: SingleInterval
    max_bandwidth: float

    def __post_init__(self):
        if self.max_bandwidth < self.band.width:
            raise ValueError(f"emitter {self.band} has max bandwidth {self.max_bandwidth} below its width")


@dataclass(frozen=True)
class Track:
    id: Hashable
    emitters: tuple[Emitter, ...]
    goal_rate: float

    def __post_init__(self):
        object.__setattr__(self, "emitters", tuple(self.emitters))
        if not self.emitters:
            raise ValueError(f"track {self.id} has no emitters")
        if not 0.0 <= self.goal_rate <= 1.0:
            raise ValueError(f"track {self.id} goal rate {self.goal_rate} outside [0, 1]")


@dataclass(frozen=True)
class Survey:
    id: Hashable
    band: SingleInterval
    goal_rate: float

    def __post_init__(self):
        if not 0.0 <= self.goal_rate <= 1.0:
            raise ValueError(f"survey {self.id} goal rate {self.goal_rate} outside [0, 1]")


@dataclass(frozen=True)
class SubSurvey:
    survey_id: Hashable
    index: int
    band: SingleInterval
    goal_rate: float

    @property
    def id(self) -> tuple:
        return (self.survey_id, self.index)


def track_key(track_id) -> tuple:
    return ("track", track_id)


def subsurvey_key(subsurvey_id) -> tuple:
    return ("sub", subsurvey_id)


@dataclass(frozen=True, eq=False)
class Configuration:
    """A shaped body inserted as one unit; weight 4 takes one receiver per node.

    Equality is identity: two configurations with the same body and weight are
    still distinct LP columns and queue entries.
    """

    body: MultipleInterval
    weight: int
    observed_tracks: frozenset = frozenset()
    observed_subsurveys: frozenset = frozenset()
    parent_id: Hashable = None

    def __post_init__(self):
        if self.weight not in (1, 4):
            raise ValueError(f"configuration weight must be 1 or 4, got {self.weight}")
        if self.weight == 1 and self.observed_tracks:
            raise ValueError("weight-1 configurations cannot observe tracks")

    @cached_property
    def tasks(self) -> frozenset:
        """Observed tracks and sub-surveys under one tagged key space."""
        return frozenset(map(track_key, self.observed_tracks)) | frozenset(
            map(subsurvey_key, self.observed_subsurveys)
        )

    def observation_key(self) -> tuple:
        return (self.observed_tracks, self.observed_subsurveys, self.weight)

    def __repr__(self):
        return f"Configuration({self.body!r}, w={self.weight})"


@dataclass
class Instance:
    spec: SystemSpec
    tracks: list[Track]
    surveys: list[Survey]
    meta: dict = field(default_factory=dict)


def emitter_fits(single: SingleInterval, e: Emitter) -> bool:
    return contains(single, e.band) and single.width <= e.max_bandwidth


def body_observes_track(body: MultipleInterval, track: Track) -> bool:
    return any(emitter_fits(s, e) for e in track.emitters for s in body.singles)


def body_observes_band(body: MultipleInterval, band: SingleInterval) -> bool:
    return any(contains(s, band) for s in body.singles)


def config_observes_track(c: Configuration, track: Track) -> bool:
    return c.weight == 4 and body_observes_track(c.body, track)


def config_observes_subsurvey(c: Configuration, ss: SubSurvey) -> bool:
    return body_observes_band(c.body, ss.band)


class ObservationIndex:
    """Fast lookup of the tracks and sub-surveys a body can observe.

    Emitters and sub-surveys are sorted by lower edge so each single only scans
    the candidates that start inside it. Results are memoised per body.
    """

    def __init__(self, tracks: Sequence[Track], subsurveys: Sequence[SubSurvey] = ()):
        em = sorted(
            ((e.band.lo, e.band.hi, e.max_bandwidth, t.id) for t in tracks for e in t.emitters),
            key=lambda x: x[:2],
        )
        self._em = em
        self._em_lo = [x[0] for x in em]
        subs = sorted(((s.band.lo, s.band.hi, s.id) for s in subsurveys), key=lambda x: x[:2])
        self._sub = subs
        self._sub_lo = [x[0] for x in subs]
        self._track_cache: dict[MultipleInterval, frozenset] = {}
        self._sub_cache: dict[MultipleInterval, frozenset] = {}

    def tracks_for(self, body: MultipleInterval) -> frozenset:
        """Track ids whose emitters a weight-4 insertion of ``body`` observes."""
        hit = self._track_cache.get(body)
        if hit is None:
            found = set()
            for s in body.singles:
                i = bisect.bisect_left(self._em_lo, s.lo)
                j = bisect.bisect_right(self._em_lo, s.hi)
                for lo, hi, phi, tid in self._em[i:j]:
                    if hi <= s.hi and s.width <= phi:
                        found.add(tid)
            hit = self._track_cache[body] = frozenset(found)
        return hit

    def subsurveys_for(self, body: MultipleInterval) -> frozenset:
        hit = self._sub_cache.get(body)
        if hit is None:
            found = set()
            for s in body.singles:
                i = bisect.bisect_left(self._sub_lo, s.lo)
                j = bisect.bisect_right(self._sub_lo, s.hi)
                for lo, hi, sid in self._sub[i:j]:
                    if hi <= s.hi:
                        found.add(sid)
            hit = self._sub_cache[body] = frozenset(found)
        return hit

    def make_configuration(self, body: MultipleInterval, weight: int, parent_id=None) -> Configuration:
        tracks = self.tracks_for(body) if weight == 4 else frozenset()
        return Configuration(body, weight, tracks, self.subsurveys_for(body), parent_id)


@dataclass(frozen=True)
class Position:
    """Where a configuration goes: a step and the (node, receiver) cells it fills."""

    step: int
    cells: tuple[tuple[int, int], ...]


class TuningPlan:
    """Grid ``[node][receiver][step]`` of optional bodies with owning configurations."""

    def __init__(self, spec: SystemSpec):
        self.spec = spec
        n, r, t = spec.node_count, spec.receivers_per_node, spec.steps_per_plan
        self.cells: list[list[list[MultipleInterval | None]]] = [
            [[None] * t for _ in range(r)] for _ in range(n)
        ]
        self.owners: list[list[list[Configuration | None]]] = [
            [[None] * t for _ in range(r)] for _ in range(n)
        ]
        self._free = [[r] * t for _ in range(n)]

    @property
    def steps(self) -> int:
        return self.spec.steps_per_plan

    def free_count(self, node: int, step: int) -> int:
        return self._free[node][step]

    def empty_cells_at(self, step: int) -> int:
        return sum(self._free[n][step] for n in range(self.spec.node_count))

    def occupied_count(self) -> int:
        return self.spec.cell_count - sum(map(sum, self._free))

    def set_cell(self, node: int, receiver: int, step: int, body: MultipleInterval,
                 owner: Configuration | None = None) -> None:
        if self.cells[node][receiver][step] is not None:
            raise ValueError(f"cell (node {node}, receiver {receiver}, step {step}) is occupied")
        if shape_of(body) not in self.spec.shape_set:
            raise ValueError(f"body {body} has a shape outside the allowed set")
        self.cells[node][receiver][step] = body
        self.owners[node][receiver][step] = owner
        self._free[node][step] -= 1

    def insert(self, c: Configuration, q: Position) -> "TuningPlan":
        """Place ``c`` at ``q``. Rejects occupied cells and arity mismatches."""
        nodes = [n for n, _ in q.cells]
        if c.weight == 4:
            if sorted(nodes) != list(range(self.spec.node_count)):
                raise ValueError("a weight-4 position needs exactly one receiver on every node")
        elif len(q.cells) != 1:
            raise ValueError("a weight-1 position names exactly one cell")
        for n, r in q.cells:
            if self.cells[n][r][q.step] is not None:
                raise ValueError(f"cell (node {n}, receiver {r}, step {q.step}) is occupied")
        for n, r in q.cells:
            self.set_cell(n, r, q.step, c.body, c)
        return self

    def cohesion(self) -> int:
        return sum(
            min(self._free[n][t] for n in range(self.spec.node_count)) for t in range(self.steps)
        )

    def bodies_at(self, step: int) -> list[MultipleInterval]:
        return [
            rcv[step] for node in self.cells for rcv in node if rcv[step] is not None
        ]

    def configurations_at(self, step: int) -> list[Configuration]:
        seen, out = set(), []
        for node in self.owners:
            for rcv in node:
                c = rcv[step]
                if c is not None and id(c) not in seen:
                    seen.add(id(c))
                    out.append(c)
        return out

    def shared_bodies(self, step: int) -> set[MultipleInterval]:
        """Bodies held by at least one receiver on every node at ``step``."""
        common = None
        for node in self.cells:
            here = {rcv[step] for rcv in node if rcv[step] is not None}
            common = here if common is None else common & here
            if not common:
                return set()
        return common or set()

    def coverage(self, step: int) -> MultipleInterval:
        return union_all(self.bodies_at(step))

    def to_json(self) -> list:
        return [
            [[None if b is None else b.pairs() for b in rcv] for rcv in node] for node in self.cells
        ]

    @classmethod
    def from_json(cls, spec: SystemSpec, grid: list) -> "TuningPlan":
        plan = cls(spec)
        for n, node in enumerate(grid):
            for r, rcv in enumerate(node):
                for t, pairs in enumerate(rcv):
                    if pairs is not None:
                        plan.set_cell(n, r, t, MultipleInterval.of(*map(tuple, pairs)))
        return plan


def insert(plan: TuningPlan, c: Configuration, q: Position) -> TuningPlan:
    return plan.insert(c, q)


def plan_cohesion(plan: TuningPlan) -> int:
    return plan.cohesion()


def step_coverage(plan: TuningPlan, t: int) -> MultipleInterval:
    return plan.coverage(t)


def track_observed_in_step(plan: TuningPlan, t: int, track: Track) -> bool:
    return any(body_observes_track(m, track) for m in plan.shared_bodies(t))


def subsurvey_observed_in_step(plan: TuningPlan, t: int, ss: SubSurvey) -> bool:
    return any(body_observes_band(m, ss.band) for m in set(plan.bodies_at(t)))


def observed_tracks_in_step(plan: TuningPlan, t: int, index: ObservationIndex) -> frozenset:
    out: frozenset = frozenset()
    for m in plan.shared_bodies(t):
        out |= index.tracks_for(m)
    return out


def observed_subsurveys_in_step(plan: TuningPlan, t: int, index: ObservationIndex) -> frozenset:
    out: frozenset = frozenset()
    for m in set(plan.bodies_at(t)):
        out |= index.subsurveys_for(m)
    return out


def goals_of(tracks: Iterable[Track], subsurveys: Iterable[SubSurvey]) -> dict:
    """Goal rate per tagged task key."""
    goals = {track_key(t.id): t.goal_rate for t in tracks}
    goals.update({subsurvey_key(s.id): s.goal_rate for s in subsurveys})
    return goals
