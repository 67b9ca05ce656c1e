"""Shared fixtures: the worked-example task set and its fully observing plan."""
import pytest

from resourcetune.intervals import MultipleInterval, SingleInterval
from resourcetune.model import Emitter, Instance, Survey, SystemSpec, Track, TuningPlan


def worked_tasks():
    tracks = [
        Track(1, (Emitter(SingleInterval(10970, 10990), 100), Emitter(SingleInterval(11840, 11900), 100)), 0.3),
        Track(2, (Emitter(SingleInterval(10545, 10600), 100), Emitter(SingleInterval(11005, 11050), 100)), 0.5),
        Track(3, (Emitter(SingleInterval(10200, 10230), 50),), 0.2),
    ]
    surveys = [
        Survey(1, SingleInterval(11350, 11900), 0.4),
        Survey(2, SingleInterval(10900, 11250), 0.5),
        Survey(3, SingleInterval(10100, 10750), 0.3),
    ]
    return tracks, surveys


M = MultipleInterval.of

# Bodies placed on receiver 0 of every node (steps are 1-based here).
SHARED = {
    M((10950, 11050), (11150, 11250)): (1, 9, 10),
    M((10500, 10600), (10700, 10800)): (4, 8),
    M((10190, 10240)): (2, 3),
}
# Single-receiver bodies, filled into the first free cell at each listed step.
SINGLE = {
    M((10900, 11000), (11100, 11200)): (5, 6),
    M((11000, 11100), (11200, 11300)): (5, 6),
    M((10850, 10950)): (3, 4, 7),
    M((11050, 11150)): (3, 4, 7),
    M((10100, 10200), (10300, 10400)): (3, 4, 5),
    M((10200, 10300), (10400, 10500)): (3, 4, 5),
    M((10600, 10700), (10800, 10900)): (5, 6, 7),
    M((10500, 10600), (10700, 10800)): (5,),
    M((11350, 11450), (11550, 11650)): (5, 6, 7, 10),
    M((11450, 11550), (11650, 11750)): (1, 2, 8, 9),
    M((11750, 11850)): (1, 2, 8, 9),
    M((11800, 11900)): (5, 6, 8, 10),
}


def worked_plan(spec=None):
    spec = spec or SystemSpec()
    plan = TuningPlan(spec)
    for body, steps in SHARED.items():
        for t in steps:
            for n in range(spec.node_count):
                plan.set_cell(n, 0, t - 1, body)
    for body, steps in SINGLE.items():
        for t in steps:
            n, r = next(
                (n, r)
                for n in range(spec.node_count)
                for r in range(spec.receivers_per_node)
                if plan.cells[n][r][t - 1] is None
            )
            plan.set_cell(n, r, t - 1, body)
    return plan


@pytest.fixture
def tasks():
    return worked_tasks()


@pytest.fixture
def fig_plan():
    return worked_plan()


@pytest.fixture
def worked_instance():
    tracks, surveys = worked_tasks()
    return Instance(SystemSpec(), tracks, surveys, {"seed": 0})


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
