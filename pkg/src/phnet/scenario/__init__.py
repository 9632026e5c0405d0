"""Scenario files: schema, loading and object construction."""

from phnet.scenario.build import BuiltScenario, build_scenario
from phnet.scenario.loader import LoadedScenario, canonical_hash, load_scenario, parse_scenario
from phnet.scenario.schema import ScenarioFile

__all__ = [
    "BuiltScenario",
    "LoadedScenario",
    "ScenarioFile",
    "build_scenario",
    "canonical_hash",
    "load_scenario",
    "parse_scenario",
]
