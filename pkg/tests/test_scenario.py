import pytest
from hypothesis import given, settings, strategies as st
import numpy as np

from resourcetune.intervals import SingleInterval
from resourcetune.model import Survey
from resourcetune.scenario import (
    ScenarioParams,
    expected_utilization,
    generate_instance,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    save_instance,
    scale_rates,
)


def test_worked_tasks_utilization(tasks):
    u_tr, u_sv, u = expected_utilization(*tasks)
    assert (u_tr, u_sv, u) == pytest.approx((0.5, 0.425, 0.925))


def test_utilization_edge_cases():
    assert expected_utilization([], []) == (0, 0, 0)
    assert expected_utilization([], [Survey(0, SingleInterval(100, 450), 0.5)])[1] == pytest.approx(0.125)


def test_params_validation():
    with pytest.raises(ValueError):
        ScenarioParams(0.0, 0.5)
    with pytest.raises(ValueError):
        ScenarioParams(1.0, 1.5)
    with pytest.raises(ValueError):
        ScenarioParams(1.0, 0.5, emitters_per_track=(3, 1))


def test_same_seed_same_instance(tmp_path):
    a = save_instance(generate_instance(ScenarioParams(2.0, 0.5, seed=11)), tmp_path / "a.json")
    b = save_instance(generate_instance(ScenarioParams(2.0, 0.5, seed=11)), tmp_path / "b.json")
    assert a.read_bytes() == b.read_bytes()
    c = save_instance(generate_instance(ScenarioParams(2.0, 0.5, seed=12)), tmp_path / "c.json")
    assert a.read_bytes() != c.read_bytes()


def test_json_round_trip(tmp_path):
    inst = generate_instance(ScenarioParams(1.0, 0.25, seed=3))
    again = load_instance(save_instance(inst, tmp_path / "i.json"))
    assert instance_to_dict(again) == instance_to_dict(inst)
    d = instance_to_dict(inst)
    assert set(d) == {"spec", "tracks", "surveys", "meta"}
    assert set(d["tracks"][0]) == {"id", "goal_rate", "emitters"}
    assert set(d["tracks"][0]["emitters"][0]) == {"lo", "hi", "max_bandwidth"}
    assert set(d["surveys"][0]) == {"id", "lo", "hi", "goal_rate"}
    assert d["meta"] == {"seed": 3, "utilization": 1.0, "track_proportion": 0.25}
    assert instance_to_dict(instance_from_dict(d)) == d


def test_scale_rates_clamps_and_redistributes():
    rates = scale_rates(np.array([1.0, 0.1, 0.1]), np.ones(3), 1.5)
    assert rates[0] == 1.0
    assert rates.sum() == pytest.approx(1.5)
    assert rates[1] == pytest.approx(rates[2])
    with pytest.raises(ValueError):
        scale_rates(np.array([0.5, 0.5]), np.ones(2), 2.5)


@settings(max_examples=25, deadline=None)
@given(
    st.floats(0.3, 3.0),
    st.sampled_from([0.0, 0.25, 0.5, 0.75, 1.0]),
    st.integers(0, 10_000),
)
def test_generated_instances_satisfy_invariants(u, p, seed):
    params = ScenarioParams(u, p, seed=seed)
    inst = generate_instance(params)
    u_tr, u_sv, total = expected_utilization(inst.tracks, inst.surveys)
    assert u_tr == pytest.approx(p * u, abs=1e-9)
    assert u_sv == pytest.approx((1 - p) * u, abs=1e-9)
    assert total == pytest.approx(u, abs=1e-9)
    assert len(inst.tracks) == 50 and len(inst.surveys) == 10
    for t in inst.tracks:
        assert 1 <= len(t.emitters) <= 3
        assert 0 <= t.goal_rate <= 1
        if p > 0:
            assert t.goal_rate > 0
        for e in t.emitters:
            assert 1 - 1e-9 <= e.band.width <= 50 + 1e-9
            assert 10000 <= e.band.lo and e.band.hi <= 16000
            assert e.band.width <= e.max_bandwidth <= 100
    bands = sorted((s.band.lo, s.band.hi) for s in inst.surveys)
    assert bands[0][0] == 10000 and bands[-1][1] == 16000
    assert all(a[1] == b[0] for a, b in zip(bands, bands[1:]))
    for s in inst.surveys:
        assert 0 < s.goal_rate <= 1 if p < 1 else s.goal_rate == 0


def test_cap_probability_roughly_three_quarters():
    inst = generate_instance(ScenarioParams(1.0, 0.5, seed=0, track_count=400))
    es = [e for t in inst.tracks for e in t.emitters]
    share = sum(e.max_bandwidth == 100 for e in es) / len(es)
    assert 0.68 < share < 0.82
