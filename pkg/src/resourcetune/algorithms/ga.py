"""Genetic-algorithm baseline: one gene per (node, receiver, step) cell.

Alleles are the baseline configurations (plus idle); a gene places its
configuration's body in that one cell, whatever the configuration's weight.
Fitness is the full objective over every plan emitted so far plus the
candidate. Contributions of archived plans are folded into per-segment and
per-track running sums, so scoring a candidate touches only its own genes.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from ..intervals import MultipleInterval
from ..model import Instance, TuningPlan, body_observes_track
from ..preprocess import build_baseline_configurations
from .base import CycleTiming, Strategy

IDLE = -1


class CachedObjective:
    """Objective of ``archive + candidate`` for gene arrays of shape (P, N, R, T).

    ``alleles`` may repeat a body; genes are mapped to distinct bodies first so
    equal bodies count as shared across nodes. Frequencies are cut at every
    body and survey endpoint, so coverage is constant on each elementary
    segment and the survey integral is a weighted sum over segments.
    """

    def __init__(self, alleles: list[MultipleInterval], instance: Instance):
        bodies = list(dict.fromkeys(alleles))
        uid = {b: i for i, b in enumerate(bodies)}
        # trailing entry maps IDLE (-1) to the empty row
        self.body_of = np.array([uid[b] for b in alleles] + [len(bodies)])
        self.empty = len(bodies)
        spec = instance.spec
        self.steps = spec.steps_per_plan
        tracks, surveys = instance.tracks, instance.surveys
        pts = {x for b in bodies for s in b.singles for x in (s.lo, s.hi)}
        pts |= {x for s in surveys for x in (s.band.lo, s.band.hi)}
        edges = np.array(sorted(pts))
        mids = 0.5 * (edges[:-1] + edges[1:])
        lens = np.diff(edges)
        self.mask = np.zeros((len(bodies) + 1, mids.size), dtype=bool)
        for i, b in enumerate(bodies):
            for s in b.singles:
                self.mask[i] |= (mids > s.lo) & (mids < s.hi)
        self.survey_weight = np.zeros((len(surveys), mids.size))
        for i, s in enumerate(surveys):
            inside = (mids > s.band.lo) & (mids < s.band.hi)
            self.survey_weight[i, inside] = lens[inside] / s.band.width
        self.survey_goal = np.array([s.goal_rate for s in surveys])
        self.track_goal = np.array([t.goal_rate for t in tracks])
        self.body_tracks = np.zeros((len(bodies) + 1, len(tracks)), dtype=bool)
        for i, b in enumerate(bodies):
            for j, t in enumerate(tracks):
                self.body_tracks[i, j] = body_observes_track(b, t)
        self.seg_sum = np.zeros(mids.size)
        self.track_sum = np.zeros(len(tracks))
        self.archived = 0

    def _rates(self, genes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        P, N, R, T = genes.shape
        g = self.body_of[genes]
        seg = np.zeros((P, self.mask.shape[1]))
        trk = np.zeros((P, self.body_tracks.shape[1]))
        for t in range(T):
            cells = g[:, :, :, t].reshape(P, N * R)
            seg += self.mask[cells].any(axis=1)
            seen = np.zeros_like(trk, dtype=bool)
            for r0 in range(R):
                b = g[:, 0, r0, t]
                shared = (b != self.empty) & np.all(
                    np.any(g[:, :, :, t] == b[:, None, None], axis=2), axis=1
                )
                seen |= self.body_tracks[b] & shared[:, None]
            trk += seen
        return seg / T, trk / T

    def __call__(self, genes: np.ndarray) -> np.ndarray:
        seg, trk = self._rates(genes)
        n = self.archived + 1
        track_short = np.maximum(0.0, self.track_goal - (self.track_sum + trk) / n).sum(axis=1)
        seg_rate = (self.seg_sum + seg) / n
        short = np.maximum(0.0, self.survey_goal[None, :, None] - seg_rate[:, None, :])
        survey_short = (short * self.survey_weight[None]).sum(axis=(1, 2))
        return track_short + survey_short

    def archive(self, genes: np.ndarray) -> None:
        seg, trk = self._rates(genes[None])
        self.seg_sum += seg[0]
        self.track_sum += trk[0]
        self.archived += 1


@dataclass
class GeneticAlgorithm(Strategy):
    """Two-phase GA per plan.

    Phase one only uses weight-4 configurations as alleles; its best
    individuals seed part of phase two, which uses every configuration.
    Genes are free per cell, so a track is seen only where all nodes happen
    to carry the same body. With ``synchronised_phase_one`` phase one instead
    evolves one gene per (receiver, step) copied to every node, which makes
    shared bodies, and so track observations, far easier to find.
    Each phase stops at its time limit or generation cap.
    """

    seed: int = 0
    phase_seconds: float | None = None
    max_generations: int | None = None
    population: int = 50
    elite: int = 2
    crossover_rate: float = 0.9
    seed_fraction: float = 0.5
    synchronised_phase_one: bool = False
    name = "ga"

    def __post_init__(self):
        inst = self.instance
        self.configs, self.subsurveys = build_baseline_configurations(inst.tracks, inst.surveys, inst.spec)
        self.alleles = [c.body for c in self.configs]
        self.objective = CachedObjective(self.alleles, inst)
        self.all_pool = np.arange(IDLE, len(self.configs))
        self.heavy_pool = np.array([IDLE] + [i for i, c in enumerate(self.configs) if c.weight == 4])
        self.rng = np.random.default_rng(np.random.SeedSequence(self.seed))
        if self.phase_seconds is None:
            # leave headroom for setup and decoding inside the cycle budget
            self.phase_seconds = 0.45 * self.budget_seconds
        spec = inst.spec
        self.shape4 = (spec.node_count, spec.receivers_per_node, spec.steps_per_plan)
        self.generations: list[int] = []
        self.best_history: list[list[float]] = []

    @property
    def chromosome_length(self) -> int:
        n, r, t = self.shape4
        return n * r * t

    def _random(self, count: int, shape: tuple, pool: np.ndarray) -> np.ndarray:
        return self.rng.choice(pool, size=(count, *shape))

    def _evolve(self, pop: np.ndarray, score, pool: np.ndarray,
                deadline: float) -> tuple[np.ndarray, np.ndarray, list[float]]:
        """Generational loop with elitism, binary tournaments, uniform crossover and reset mutation."""
        fit = score(pop)
        P = pop.shape[0]
        flat_len = int(np.prod(pop.shape[1:]))
        best = [float(fit.min())]
        gen = 0
        while time.perf_counter() < deadline and (self.max_generations is None or gen < self.max_generations):
            order = np.argsort(fit, kind="stable")
            elite = pop[order[: self.elite]]
            n_child = P - self.elite
            a = self.rng.integers(0, P, size=(n_child, 2))
            b = self.rng.integers(0, P, size=(n_child, 2))
            pa = np.where(fit[a[:, 0]] <= fit[a[:, 1]], a[:, 0], a[:, 1])
            pb = np.where(fit[b[:, 0]] <= fit[b[:, 1]], b[:, 0], b[:, 1])
            xa = pop[pa].reshape(n_child, flat_len)
            xb = pop[pb].reshape(n_child, flat_len)
            swap = self.rng.random((n_child, flat_len)) < 0.5
            swap &= (self.rng.random(n_child) < self.crossover_rate)[:, None]
            child = np.where(swap, xb, xa)
            mutate = self.rng.random(child.shape) < 1.0 / flat_len
            child = np.where(mutate, self.rng.choice(pool, size=child.shape), child)
            child = child.reshape(n_child, *pop.shape[1:])
            pop = np.concatenate([elite, child])
            fit = np.concatenate([fit[order[: self.elite]], score(child)])
            best.append(float(fit.min()))
            gen += 1
        self.generations.append(gen)
        return pop, fit, best

    def _expand(self, sync: np.ndarray) -> np.ndarray:
        n = self.shape4[0]
        return np.repeat(sync[:, None], n, axis=1)

    def _cycle(self):
        t0 = time.perf_counter()
        n, r, t = self.shape4
        if self.synchronised_phase_one:
            pop1, fit1, best1 = self._evolve(
                self._random(self.population, (r, t), self.heavy_pool),
                lambda s: self.objective(self._expand(s)),
                self.heavy_pool,
                time.perf_counter() + self.phase_seconds,
            )
            pop1 = self._expand(pop1)
        else:
            pop1, fit1, best1 = self._evolve(
                self._random(self.population, self.shape4, self.heavy_pool),
                self.objective,
                self.heavy_pool,
                time.perf_counter() + self.phase_seconds,
            )
        keep = int(round(self.seed_fraction * self.population))
        seeded = pop1[np.argsort(fit1, kind="stable")[:keep]]
        pop2 = np.concatenate([seeded, self._random(self.population - keep, self.shape4, self.all_pool)])
        pop2, fit2, best2 = self._evolve(pop2, self.objective, self.all_pool, time.perf_counter() + self.phase_seconds)
        winner = pop2[int(np.argmin(fit2))]
        self.objective.archive(winner)
        self.best_history.append(best1 + best2)
        return self.decode(winner), CycleTiming(plan_seconds=time.perf_counter() - t0)

    def decode(self, genes: np.ndarray) -> TuningPlan:
        plan = TuningPlan(self.instance.spec)
        for (node, rcv, step), g in np.ndenumerate(genes):
            if g != IDLE:
                plan.set_cell(node, rcv, step, self.alleles[g])
        return plan
