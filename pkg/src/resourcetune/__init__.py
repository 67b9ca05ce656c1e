"""Receiver tuning-plan construction for passive surveillance systems.

Frequency bands are multiple-intervals; tracks and surveys are observed by
configurations placed into a node x receiver x step grid. ``ResourceTune``
chooses configuration rates with a covering LP and packs them into plans;
``Greedy`` and ``GeneticAlgorithm`` are the comparison baselines.
"""
from .algorithms import GeneticAlgorithm, Greedy, ResourceTune, make_strategy
from .evaluator import EvaluationReport, evaluate
from .intervals import MultipleInterval, Shape, SingleInterval
from .model import (
    Configuration,
    Emitter,
    Instance,
    Position,
    SubSurvey,
    Survey,
    SystemSpec,
    Track,
    TuningPlan,
)
from .scenario import ScenarioParams, generate_instance, load_instance, save_instance

__all__ = [
    "Configuration", "Emitter", "EvaluationReport", "GeneticAlgorithm", "Greedy", "Instance",
    "MultipleInterval", "Position", "ResourceTune", "ScenarioParams", "Shape", "SingleInterval",
    "SubSurvey", "Survey", "SystemSpec", "Track", "TuningPlan", "evaluate", "generate_instance",
    "load_instance", "make_strategy", "save_instance",
]
__version__ = "0.1.0"
