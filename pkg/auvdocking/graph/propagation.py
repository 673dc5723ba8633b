# auvdocking/graph/propagation.py

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from auvdocking.dataflows.utils import derive_seed
from auvdocking.dynamics.vehicle import VehicleState
from auvdocking.guidance.dubins import DubinsPath
from auvdocking.guidance.fsm import DockingStage
from auvdocking.guidance.ilos import IlosState
from auvdocking.guidance.waypoints import DockDrift, DockEstimator, DockPose
from auvdocking.models.scenario import Scenario
from auvdocking.sensors.acoustic import AcousticChannel

# Independent random streams per episode
SPAWN_STREAM = 1
CHANNEL_STREAM = 2
DRIFT_STREAM = 3
RENDER_STREAM = 4
CURRENT_STREAM = 5


@dataclass
class EpisodeState:
    """Everything the episode loop mutates."""

    vehicle: VehicleState
    dock: DockPose
    current: np.ndarray
    channel: AcousticChannel
    drift: DockDrift
    estimator: DockEstimator
    render_rng: np.random.Generator
    stage: DockingStage = DockingStage.APPROACH_SETUP
    path: Optional[DubinsPath] = None
    ilos: IlosState = field(default_factory=IlosState)
    terminal_entries: int = 0
    missed: bool = False
    waiting_for_fix: bool = True
    timeline: List[Dict[str, Any]] = field(default_factory=list)


class Propagator:
    """Handles episode initialization: spawn pose, dock, current and random streams."""

    def __init__(self, scenario: Scenario):
        """Initialize with configuration parameters."""
        self.scenario = scenario

    def spawn(self, dock: DockPose, rng: np.random.Generator) -> VehicleState:
        """Surfaced and at rest 10-15 m in front of the dock, roughly facing it."""
        p = self.scenario.spawn
        distance = rng.uniform(p.distance_min, p.distance_max)
        side = rng.uniform(-1.0, 1.0)
        lateral = math.copysign(p.lateral_min + abs(side) * (p.lateral_max - p.lateral_min), side)
        normal = np.array([-dock.axis[1], dock.axis[0]])
        xy = dock.along(-distance) + lateral * normal
        heading = dock.heading + math.radians(p.heading_jitter_deg) * rng.uniform(-1.0, 1.0)
        return VehicleState(eta1=[xy[0], xy[1], 0.0], eta2=[0.0, 0.0, heading])

    def current_vector(self, dock: DockPose, rng: np.random.Generator) -> np.ndarray:
        c = self.scenario.current
        if c.direction == "perpendicular":
            direction = dock.heading + math.pi / 2.0
        else:
            direction = rng.uniform(-math.pi, math.pi)
        return c.speed * np.array([math.cos(direction), math.sin(direction), 0.0])

    def create_initial_state(self, seed: int) -> EpisodeState:
        """Create the initial state for one episode."""
        scenario = self.scenario
        dock = DockPose.from_params(scenario.dock)

        channel_seed = scenario.channel.seed
        if channel_seed is None:
            channel_seed = derive_seed(seed, CHANNEL_STREAM)

        return EpisodeState(
            vehicle=self.spawn(dock, np.random.default_rng(derive_seed(seed, SPAWN_STREAM))),
            dock=dock,
            current=self.current_vector(dock, np.random.default_rng(derive_seed(seed, CURRENT_STREAM))),
            channel=AcousticChannel(scenario.channel, seed=channel_seed),
            drift=DockDrift(scenario.dock.drift, dock, np.random.default_rng(derive_seed(seed, DRIFT_STREAM))),
            estimator=DockEstimator(scenario.guidance.fix_window, scenario.dock.depth),
            render_rng=np.random.default_rng(derive_seed(seed, RENDER_STREAM)),
        )
