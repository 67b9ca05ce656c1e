"""Plan-producing strategies behind one ``next_plan`` interface."""
from .base import CycleTiming, Strategy
from .ga import CachedObjective, GeneticAlgorithm
from .greedy import Greedy
from .resourcetune import ResourceTune

ALGORITHMS = {
    "resourcetune": ResourceTune,
    "greedy": Greedy,
    "ga": GeneticAlgorithm,
}


def make_strategy(name: str, instance, **kwargs) -> Strategy:
    try:
        cls = ALGORITHMS[name]
    except KeyError:
        raise ValueError(f"unknown algorithm {name!r}; expected one of {sorted(ALGORITHMS)}") from None
    return cls(instance, **kwargs)


__all__ = [
    "ALGORITHMS",
    "CachedObjective",
    "CycleTiming",
    "GeneticAlgorithm",
    "Greedy",
    "ResourceTune",
    "Strategy",
    "make_strategy",
]
