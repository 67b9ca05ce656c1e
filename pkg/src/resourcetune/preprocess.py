"""Task preprocessing: survey splitting and configuration construction."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .intervals import MultipleInterval, Shape, SingleInterval, realize_shape
from .model import INF, Configuration, ObservationIndex, SubSurvey, Survey, SystemSpec, Track

log = logging.getLogger(__name__)

VARIANTS = ("left_right", "centered", "left_center_right", "baseline")


@dataclass(frozen=True)
class PreprocessParams:
    split_size: float = 5.0
    variant: str = "left_right"

    def __post_init__(self):
        if not self.split_size > 0:
            raise ValueError(f"split size must be positive, got {self.split_size}")
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}; expected one of {VARIANTS}")


@dataclass
class Parent:
    """An emitter or sub-survey that configurations are built around."""

    id: tuple
    band: SingleInterval
    cap: float = INF


@dataclass
class Preprocessed:
    subsurveys: list[SubSurvey]
    configurations: list[Configuration]
    skipped: list[tuple] = field(default_factory=list)
    parents: list[tuple] = field(default_factory=list)


def split_surveys(surveys: Iterable[Survey], k: float) -> list[SubSurvey]:
    """Cut each survey left to right into bands of width ``k``; the tail may be shorter."""
    if not k > 0:
        raise ValueError(f"split size must be positive, got {k}")
    out = []
    for s in surveys:
        lo, hi = s.band.lo, s.band.hi
        for y in range(math.ceil((hi - lo) / k)):
            a = lo + y * k
            b = min(lo + (y + 1) * k, hi)
            if a >= hi:
                break
            out.append(SubSurvey(s.id, y, SingleInterval(a, b), s.goal_rate))
    return out


def parent_count(tracks: Sequence[Track], surveys: Sequence[Survey], k: float) -> int:
    """Emitters plus sub-surveys; counted from the split itself so float round-off cannot disagree."""
    return sum(len(t.emitters) for t in tracks) + len(split_surveys(surveys, k))


def select_shape(parent_width: float, cap: float, shapes: Iterable[Shape]) -> Shape | None:
    """Widest-observing shape whose every single fits between the parent width and cap.

    Ties keep the first qualifying shape in iteration order.
    """
    best = None
    for sh in shapes:
        if all(parent_width <= y <= cap for y in sh.widths):
            if best is None or sh.total_width > best.total_width:
                best = sh
    return best


def _parents(tracks: Sequence[Track], subsurveys: Sequence[SubSurvey]) -> list[Parent]:
    ps = [
        Parent(("emitter", t.id, i), e.band, e.max_bandwidth)
        for t in tracks
        for i, e in enumerate(t.emitters)
    ]
    ps += [Parent(("sub", ss.id), ss.band) for ss in subsurveys]
    return ps


def _placements(parent: Parent, shape: Shape, modes: Sequence[str]) -> list[MultipleInterval]:
    """Bodies of ``shape`` whose i-th single covers the parent, for every i and mode.

    ``left``: the designated single's upper edge sits on the parent's upper edge.
    ``right``: its lower edge sits on the parent's lower edge.
    ``center``: it is centred on the parent.
    """
    a, b = parent.band.lo, parent.band.hi
    out = []
    for off, y in zip(shape.offsets, shape.widths):
        for mode in modes:
            if mode == "left":
                origin = b - (off + y)
            elif mode == "right":
                origin = a - off
            else:
                origin = 0.5 * (a + b) - (off + 0.5 * y)
            if origin > 0:
                out.append(realize_shape(shape, origin))
    return out


def _build(tracks, subsurveys, shapes, modes, duplicate=True, skipped=None) -> list[Configuration]:
    index = ObservationIndex(tracks, subsurveys)
    heavy: list[Configuration] = []
    for p in _parents(tracks, subsurveys):
        shape = select_shape(p.band.width, p.cap, shapes)
        if shape is None:
            log.info("no allowed shape fits parent %s (width %g, cap %g)", p.id, p.band.width, p.cap)
            if skipped is not None:
                skipped.append(p.id)
            continue
        for body in _placements(p, shape, modes):
            heavy.append(index.make_configuration(body, 4, p.id))
    if not duplicate:
        return heavy
    light = [index.make_configuration(c.body, 1, c.parent_id) for c in heavy]
    return heavy + light


def build_left_right(tracks, subsurveys, shapes, skipped=None) -> list[Configuration]:
    return _build(tracks, subsurveys, shapes, ("left", "right"), skipped=skipped)


def build_centered(tracks, subsurveys, shapes, skipped=None) -> list[Configuration]:
    return _build(tracks, subsurveys, shapes, ("center",), skipped=skipped)


def build_left_center_right(tracks, subsurveys, shapes, skipped=None) -> list[Configuration]:
    return _build(tracks, subsurveys, shapes, ("left", "center", "right"), skipped=skipped)


BUILDERS = {
    "left_right": build_left_right,
    "centered": build_centered,
    "left_center_right": build_left_center_right,
}


def baseline_tiles(domain: SingleInterval, width: float = 100.0, contiguous: bool = False) -> list[MultipleInterval]:
    """(w, w, w) bodies interleaved in pairs so that together they partition ``domain``.

    Each pair covers 4w: ``[o, o+w] u [o+2w, o+3w]`` and ``[o+w, o+2w] u [o+3w, o+4w]``.
    A trailing remainder shorter than 4w is covered by single (w) bodies.
    With ``contiguous`` the bodies are laid end to end every 3w instead,
    which leaves each body's middle gap unobserved.
    """
    tiles = []
    o = domain.lo
    if contiguous:
        while o + 3 * width <= domain.hi:
            tiles.append(MultipleInterval.of((o, o + width), (o + 2 * width, o + 3 * width)))
            o += 3 * width
        return tiles
    while o + 4 * width <= domain.hi:
        tiles.append(MultipleInterval.of((o, o + width), (o + 2 * width, o + 3 * width)))
        tiles.append(MultipleInterval.of((o + width, o + 2 * width), (o + 3 * width, o + 4 * width)))
        o += 4 * width
    while o < domain.hi:
        tiles.append(MultipleInterval.of((o, o + width)))
        o += width
    return tiles


def split_at_cuts(surveys: Iterable[Survey], cuts: Sequence[float]) -> list[SubSurvey]:
    """Cut each survey band at every point of ``cuts`` lying strictly inside it."""
    cuts = sorted(set(cuts))
    out = []
    for s in surveys:
        lo, hi = s.band.lo, s.band.hi
        edges = [lo] + [c for c in cuts if lo < c < hi] + [hi]
        out += [
            SubSurvey(s.id, i, SingleInterval(a, b), s.goal_rate)
            for i, (a, b) in enumerate(zip(edges, edges[1:]))
        ]
    return out


def build_baseline_configurations(
    tracks: Sequence[Track], surveys: Sequence[Survey], spec: SystemSpec, tile_width: float = 100.0,
    contiguous: bool = False,
) -> tuple[list[Configuration], list[SubSurvey]]:
    """Configurations shared by the greedy and genetic baselines.

    The domain is partitioned by (100, 100, 100) tiles (weight 4, each also
    duplicated at weight 1), surveys are cut at the tile edges, and every
    emitter gets weight-4 bodies centred on it.
    """
    tiles = baseline_tiles(spec.frequency_domain, tile_width, contiguous)
    cuts = sorted({x for m in tiles for s in m.singles for x in (s.lo, s.hi)})
    subsurveys = split_at_cuts(surveys, cuts)
    index = ObservationIndex(tracks, subsurveys)
    heavy = [index.make_configuration(m, 4, ("tile", i)) for i, m in enumerate(tiles)]
    light = [index.make_configuration(m, 1, ("tile", i)) for i, m in enumerate(tiles)]
    emitter_configs = _build(tracks, [], spec.allowed_shapes, ("center",), duplicate=False)
    emitter_configs = [index.make_configuration(c.body, 4, c.parent_id) for c in emitter_configs]
    return heavy + light + emitter_configs, subsurveys


def dedup_unique_observation_sets(configs: Iterable[Configuration]) -> list[Configuration]:
    """Keep the first configuration per (tracks, sub-surveys, weight); drop ones observing nothing."""
    seen = set()
    out = []
    for c in configs:
        if not c.tasks:
            continue
        key = c.observation_key()
        if key not in seen:
            seen.add(key)
            out.append(c)
    return out


def preprocess(tracks: Sequence[Track], surveys: Sequence[Survey], spec: SystemSpec,
               params: PreprocessParams = PreprocessParams()) -> Preprocessed:
    """Split surveys and build configurations for the chosen variant."""
    if params.variant == "baseline":
        configs, subs = build_baseline_configurations(tracks, surveys, spec)
        return Preprocessed(subs, configs)
    subs = split_surveys(surveys, params.split_size)
    skipped: list = []
    configs = BUILDERS[params.variant](tracks, subs, spec.allowed_shapes, skipped=skipped)
    parents = [p.id for p in _parents(tracks, subs)]
    return Preprocessed(subs, configs, skipped, parents)
