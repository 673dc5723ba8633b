# auvdocking/graph/__init__.py

from .bench import preset_scenarios, run_bench, run_scenario, summarize, wilson_interval
from .calibration import beacon_detected, calibrate_water, detection_range, luminance_range
from .conditional_logic import ConditionalLogic, EnvelopeCheck
from .docking_graph import DockingSimulation, bootstrap_weights, load_detector, run_episode
from .propagation import EpisodeState, Propagator

__all__ = [
    "DockingSimulation",
    "ConditionalLogic",
    "EnvelopeCheck",
    "EpisodeState",
    "Propagator",
    "bootstrap_weights",
    "beacon_detected",
    "calibrate_water",
    "detection_range",
    "luminance_range",
    "load_detector",
    "preset_scenarios",
    "run_bench",
    "run_episode",
    "run_scenario",
    "summarize",
    "wilson_interval",
]
