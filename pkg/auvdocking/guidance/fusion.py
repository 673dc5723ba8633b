"""Blend acoustic path guidance with optical detections in terminal homing."""

from typing import Optional, Tuple

import numpy as np

from auvdocking.detection.types import Detection
from auvdocking.dynamics.vehicle import VehicleState, wrap_angle
from auvdocking.errors import BehindCamera
from auvdocking.models.scenario import CameraModel, GuidanceParams
from auvdocking.optics.camera import camera_pose, project

from .autopilot import SteeringCommand
from .fsm import DockingStage

MIN_GROUND_SPEED = 0.05
FOE_DISTANCE = 1000.0
IMAGE_CENTRE = (0.5, 0.5)


def focus_of_expansion(
    state: VehicleState, camera: CameraModel, ground_velocity: Optional[np.ndarray]
) -> Tuple[float, float]:
    """Normalized image point the camera is moving towards.

    Falls back to the image centre when the vehicle is nearly still or moving away from the view.
    """
    if ground_velocity is None:
        return IMAGE_CENTRE
    velocity = np.asarray(ground_velocity, dtype=float).reshape(3)
    speed = float(np.linalg.norm(velocity))
    if speed < MIN_GROUND_SPEED:
        return IMAGE_CENTRE
    origin, _ = camera_pose(state, camera)
    try:
        proj = project(origin + FOE_DISTANCE * velocity / speed, state, camera)
    except BehindCamera:
        return IMAGE_CENTRE
    return proj.normalized(camera)


def fuse_guidance(
    path_cmd: SteeringCommand,
    detection: Optional[Detection],
    stage: DockingStage,
    state: VehicleState,
    camera: CameraModel,
    params: GuidanceParams,
    ground_velocity: Optional[np.ndarray] = None,
) -> SteeringCommand:
    """Steer so the detected beacon sits on the focus of expansion, otherwise follow the path.

    With no sideslip the focus of expansion is the image centre and a centred detection holds
    the current attitude. In a crossflow the vehicle crabs so its track over ground, not its
    nose, points at the beacon.
    """
    if stage != DockingStage.TERMINAL_HOMING or detection is None:
        return path_cmd
    if detection.present < params.presence_threshold:
        return path_cmd

    foe_x, foe_y = focus_of_expansion(state, camera, ground_velocity)
    # Vertical offsets are rescaled so equal pixel offsets mean equal angles
    aspect = camera.height / camera.width
    heading = float(wrap_angle(state.heading + params.heading_gain * (detection.x - foe_x)))
    pitch = state.pitch - params.pitch_gain * aspect * (detection.y - foe_y)
    return SteeringCommand(heading=heading, pitch=pitch, speed=path_cmd.speed)
