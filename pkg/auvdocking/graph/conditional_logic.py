# auvdocking/graph/conditional_logic.py

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from auvdocking.dynamics.vehicle import HydroParams, VehicleState, rotation_body_to_earth, wrap_angle
from auvdocking.guidance.fsm import DockingStage, StageEvents
from auvdocking.guidance.waypoints import DockPose
from auvdocking.models.scenario import EnvelopeParams, StopRule

GPS_DEPTH = 0.5


@dataclass(frozen=True)
class EnvelopeCheck:
    """Result of the nose crossing the entrance plane."""

    crossed: bool = False
    inside: bool = False
    radial_offset: Optional[float] = None
    heading_error: Optional[float] = None


class ConditionalLogic:
    """Turns vehicle, dock and path state into stage events."""

    def __init__(self, envelope: EnvelopeParams, stop: StopRule, hydro: HydroParams):
        """Initialize with configuration parameters."""
        self.envelope = envelope
        self.stop = stop
        self.half_length = hydro.length / 2.0
        self.max_heading_error = math.radians(envelope.max_heading_error_deg)

    def nose(self, state: VehicleState) -> np.ndarray:
        j1 = rotation_body_to_earth(state.eta2)[:3, :3]
        return state.eta1 + j1 @ np.array([self.half_length, 0.0, 0.0])

    @staticmethod
    def along_track(point: np.ndarray, dock: DockPose) -> float:
        """Signed distance past the entrance plane (negative on the approach side)."""
        return float((point[:2] - dock.position) @ dock.axis)

    def has_gps_fix(self, state: VehicleState) -> bool:
        return state.depth <= GPS_DEPTH

    def check_envelope(
        self, prev_nose: np.ndarray, nose: np.ndarray, heading: float, dock: DockPose
    ) -> EnvelopeCheck:
        """Latch when the nose crosses the entrance plane inside the disk with a small heading error."""
        if not (self.along_track(prev_nose, dock) < 0.0 <= self.along_track(nose, dock)):
            return EnvelopeCheck()
        rel = nose[:2] - dock.position
        lateral = float(rel @ np.array([-dock.axis[1], dock.axis[0]]))
        vertical = float(nose[2] - dock.depth)
        radial = math.hypot(lateral, vertical)
        heading_error = abs(float(wrap_angle(heading - dock.heading)))
        inside = radial <= self.envelope.radius and heading_error <= self.max_heading_error
        return EnvelopeCheck(True, inside, radial, heading_error)

    def events(
        self,
        stage: DockingStage,
        state: VehicleState,
        path_complete: bool,
        fix_received: bool,
        envelope: EnvelopeCheck,
        missed: bool,
        detection_present: bool,
    ) -> StageEvents:
        """Events for this tick; latch and envelope misses only exist in terminal homing."""
        terminal = stage == DockingStage.TERMINAL_HOMING
        return StageEvents(
            path_complete=path_complete,
            fix_received=fix_received,
            gps_fix=self.has_gps_fix(state),
            latch=terminal and envelope.inside,
            optical_lost=terminal and not detection_present,
            envelope_missed=terminal and (missed or (path_complete and not envelope.inside)),
        )

    def retries_exhausted(self, terminal_entries: int) -> bool:
        """Each terminal-homing entry after the first is a retry."""
        return terminal_entries - 1 >= self.stop.max_retries
