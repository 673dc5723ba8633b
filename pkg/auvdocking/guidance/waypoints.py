"""Dock pose, station-keeping drift, stage waypoints and the filtered dock estimate."""

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Deque, List, Optional

import numpy as np

from auvdocking.dynamics.vehicle import wrap_angle
from auvdocking.models.scenario import DockParams, DriftParams, GuidanceParams

from .fsm import DockingStage

logger = logging.getLogger(__name__)


@dataclass
class DockPose:
    """Dock entrance position, depth and heading plus its current drift rates."""

    position: np.ndarray = field(default_factory=lambda: np.zeros(2))
    depth: float = 2.0
    heading: float = 0.0
    velocity: np.ndarray = field(default_factory=lambda: np.zeros(2))
    yaw_rate: float = 0.0

    def __post_init__(self):
        self.position = np.asarray(self.position, dtype=float).reshape(2)
        self.velocity = np.asarray(self.velocity, dtype=float).reshape(2)
        self.depth = float(self.depth)
        self.heading = float(wrap_angle(self.heading))
        self.yaw_rate = float(self.yaw_rate)

    @classmethod
    def from_params(cls, params: DockParams) -> "DockPose":
        return cls(position=params.position, depth=params.depth, heading=params.heading)

    @property
    def axis(self) -> np.ndarray:
        """Unit vector along the centerline, pointing into the dock."""
        return np.array([math.cos(self.heading), math.sin(self.heading)])

    @property
    def entrance(self) -> np.ndarray:
        return np.array([self.position[0], self.position[1], self.depth])

    def along(self, distance: float) -> np.ndarray:
        """Point on the centerline; negative distances lie on the approach side."""
        return self.position + distance * self.axis

    def lateral_offset(self, xy) -> float:
        """Signed distance of a horizontal point from the centerline, positive to starboard."""
        normal = np.array([-self.axis[1], self.axis[0]])
        return float(normal @ (np.asarray(xy, dtype=float)[:2] - self.position))

    def copy(self) -> "DockPose":
        return DockPose(self.position.copy(), self.depth, self.heading, self.velocity.copy(), self.yaw_rate)

    def to_record(self) -> dict:
        return {
            "position": self.position.tolist(),
            "depth": self.depth,
            "heading": self.heading,
        }


class DockDrift:
    """Slow random-walk motion of the dock around its anchor."""

    def __init__(self, params: DriftParams, anchor: DockPose, rng: np.random.Generator):
        self.params = params
        self.anchor = anchor.copy()
        self.rng = rng

    def step(self, dock: DockPose, dt: float) -> DockPose:
        if not self.params.enabled:
            return dock
        p = self.params
        sqrt_dt = math.sqrt(dt)

        velocity = dock.velocity + p.velocity_sigma * sqrt_dt * self.rng.standard_normal(2)
        velocity -= p.reversion * (dock.position - self.anchor.position) * dt
        speed = float(np.linalg.norm(velocity))
        if speed > p.max_speed:
            velocity *= p.max_speed / speed

        yaw_cap = math.radians(p.max_yaw_rate_deg)
        yaw_rate = dock.yaw_rate + math.radians(p.yaw_jitter_deg) * sqrt_dt * float(self.rng.standard_normal())
        yaw_rate -= p.reversion * float(wrap_angle(dock.heading - self.anchor.heading)) * dt
        yaw_rate = float(np.clip(yaw_rate, -yaw_cap, yaw_cap))

        return DockPose(
            position=dock.position + velocity * dt,
            depth=dock.depth,
            heading=dock.heading + yaw_rate * dt,
            velocity=velocity,
            yaw_rate=yaw_rate,
        )


@dataclass(frozen=True)
class Waypoint:
    x: float
    y: float
    heading: float
    depth: float

    @property
    def pose(self):
        return (self.x, self.y, self.heading)


def stage_waypoints(dock: DockPose, stage: DockingStage, params: GuidanceParams) -> List[Waypoint]:
    """Goal waypoint(s) of a docking stage for the given dock estimate."""
    psi = dock.heading
    if stage == DockingStage.APPROACH_SETUP:
        x, y = dock.along(-params.r_as)
        return [Waypoint(float(x), float(y), psi, 0.0)]
    if stage == DockingStage.APPROACH:
        x, y = dock.along(-params.r_a)
        return [Waypoint(float(x), float(y), psi, dock.depth)]
    if stage == DockingStage.TERMINAL_HOMING:
        x0, y0 = dock.along(-params.r_h1)
        x1, y1 = dock.along(params.r_h2)
        return [
            Waypoint(float(x0), float(y0), psi, dock.depth),
            Waypoint(float(x1), float(y1), psi, dock.depth),
        ]
    raise ValueError(f"No waypoints for stage {stage}")


class DockEstimator:
    """Sliding-window average of acoustic fixes."""

    def __init__(self, window: int, depth: float):
        self.window = window
        self.depth = depth
        self._fixes: Deque = deque(maxlen=window)

    def __len__(self) -> int:
        return len(self._fixes)

    def update(self, fix) -> DockPose:
        self._fixes.append(fix)
        return self.estimate()

    def estimate(self) -> Optional[DockPose]:
        if not self._fixes:
            return None
        xy = np.array([f.position for f in self._fixes], dtype=float)
        headings = np.array([f.heading for f in self._fixes], dtype=float)
        heading = math.atan2(float(np.mean(np.sin(headings))), float(np.mean(np.cos(headings))))
        return DockPose(position=xy.mean(axis=0), depth=self.depth, heading=heading)
