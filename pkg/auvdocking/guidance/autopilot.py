"""Heading, pitch and depth autopilots producing a ControlInput."""

import math
from dataclasses import dataclass

import numpy as np

from auvdocking.dynamics.vehicle import ControlInput, HydroParams, VehicleState, wrap_angle
from auvdocking.models.scenario import AutopilotParams


@dataclass(frozen=True)
class SteeringCommand:
    """Desired heading (rad), desired pitch (rad) and surge speed (m/s)."""

    heading: float
    pitch: float
    speed: float


def depth_to_pitch(depth: float, depth_d: float, params: AutopilotParams) -> float:
    """Pitch demand for a depth error; nose down (negative pitch) to go deeper."""
    limit = math.radians(params.max_pitch_deg)
    return float(np.clip(params.depth_kp * (depth - depth_d), -limit, limit))


class Autopilot:
    """PD moment loops on heading and pitch plus feed-forward surge thrust."""

    def __init__(self, params: AutopilotParams, hydro: HydroParams):
        self.params = params
        self.hydro = hydro
        self._surge_drag = -float(hydro.damping[0])
        self._pitch_limit = math.radians(params.max_pitch_deg)

    def command(self, state: VehicleState, steering: SteeringCommand) -> ControlInput:
        p = self.params
        _, q, r = state.v2
        pitch_d = float(np.clip(steering.pitch, -self._pitch_limit, self._pitch_limit))

        yaw_moment = p.yaw_kp * float(wrap_angle(steering.heading - state.heading)) - p.yaw_kd * r
        pitch_moment = p.pitch_kp * float(wrap_angle(pitch_d - state.pitch)) - p.pitch_kd * q
        thrust = self._surge_drag * steering.speed

        return ControlInput(
            thrust=thrust,
            fin_forces=(0.0, 0.0, 0.0),
            fin_moments=(0.0, pitch_moment, yaw_moment),
        ).clamped(self.hydro)
