import pytest
from hypothesis import given, settings, strategies as st

from resourcetune.intervals import MultipleInterval
from resourcetune.model import Configuration, Position, SystemSpec, TuningPlan
from resourcetune.planner import construct_plan, feasible_positions, select_position

M = MultipleInterval.of
SPEC = SystemSpec()


def cfg(weight, tracks=(), subs=(), lo=100):
    return Configuration(M((lo, lo + 50)), weight, frozenset(tracks), frozenset(subs))


def steps_holding(plan, c):
    return [t for t in range(plan.steps) if c in plan.configurations_at(t)]


def test_light_positions_on_empty_plan():
    c = cfg(1, subs=(1,))
    plan = TuningPlan(SPEC)
    assert len(feasible_positions(plan, c, False)) == 80
    assert feasible_positions(plan, c, True) == []


def test_heavy_positions_never_pass_fragmentation_filter():
    c = cfg(4, tracks=(1,))
    plan = TuningPlan(SPEC)
    assert feasible_positions(plan, c, True) == []
    assert len(feasible_positions(plan, c, False)) == 10 * 2**4


def test_overlap_excludes_step():
    plan = TuningPlan(SPEC)
    plan.insert(cfg(4, tracks=(1,)), Position(3, tuple((n, 0) for n in range(4))))
    other = cfg(4, tracks=(1, 2), lo=300)
    assert all(q.step != 3 for q in feasible_positions(plan, other, False))
    unrelated = cfg(4, tracks=(5,), lo=300)
    assert any(q.step == 3 for q in feasible_positions(plan, unrelated, False))


def test_select_position_prefers_loaded_step():
    plan = TuningPlan(SPEC)
    for n, r in [(0, 0), (0, 1), (1, 0), (1, 1), (2, 0)]:
        plan.set_cell(n, r, 6, M((100, 150)))
    plan.set_cell(0, 0, 2, M((100, 150)))
    qs = [Position(2, ((1, 0),)), Position(6, ((3, 1),)), Position(6, ((2, 1),))]
    assert select_position(qs, plan) == Position(6, ((2, 1),))
    tie = [Position(5, ((0, 0),)), Position(4, ((0, 1),))]
    assert select_position(tie, plan) == Position(4, ((0, 1),))
    assert select_position([qs[0]], plan) == qs[0]
    with pytest.raises(ValueError):
        select_position([], plan)


def test_rate_point_three_gives_three_steps():
    c = cfg(4, tracks=(1,))
    plan = construct_plan([c], {c: 0.3}, SPEC)
    assert len(steps_holding(plan, c)) == 3


def test_full_rate_fills_every_step():
    c = cfg(4, tracks=(1,))
    plan = construct_plan([c], {c: 1.0}, SPEC)
    assert steps_holding(plan, c) == list(range(10))


def test_saturation_terminates():
    configs = [cfg(4, tracks=(i,), lo=100 + 60 * i) for i in range(10)]
    configs += [cfg(1, subs=(i,), lo=2000 + 60 * i) for i in range(10)]
    plan = construct_plan(configs, {c: 1.0 for c in configs}, SPEC)
    for t in range(10):
        assert plan.empty_cells_at(t) == 0


def test_light_configurations_cluster():
    a, b = cfg(1, subs=(1,)), cfg(1, subs=(2,), lo=300)
    plan = construct_plan([a, b], {a: 0.1, b: 0.1}, SPEC)
    assert steps_holding(plan, a) == steps_holding(plan, b) == [0]


def test_zero_rate_is_not_inserted():
    c = cfg(4, tracks=(1,))
    assert construct_plan([c], {c: 0.0}, SPEC).occupied_count() == 0


@st.composite
def workloads(draw):
    n = draw(st.integers(1, 12))
    configs, rates = [], {}
    for i in range(n):
        w = draw(st.sampled_from([1, 4]))
        tasks = frozenset(draw(st.sets(st.integers(0, 6), min_size=1, max_size=3)))
        c = Configuration(M((100 + 10 * i, 150 + 10 * i)), w,
                          tasks if w == 4 else frozenset(), frozenset() if w == 4 else tasks)
        configs.append(c)
        rates[c] = draw(st.sampled_from([0.0, 0.1, 0.25, 0.3, 0.5, 0.75, 1.0]))
    return configs, rates


@settings(max_examples=60, deadline=None)
@given(workloads())
def test_plan_invariants(work):
    configs, rates = work
    plan = construct_plan(configs, rates, SPEC)
    for t in range(plan.steps):
        here = plan.configurations_at(t)
        for i, a in enumerate(here):
            for b in here[i + 1:]:
                assert not (a.tasks & b.tasks)
    for c in configs:
        assert len(steps_holding(plan, c)) / plan.steps <= rates[c] + 1 / plan.steps + 1e-9
        positions_strict = set(feasible_positions(plan, c, True))
        assert positions_strict <= set(feasible_positions(plan, c, False))
