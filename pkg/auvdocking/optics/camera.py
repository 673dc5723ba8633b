"""Pinhole projection through the camera mount.

Camera frame: x along the optical axis, y to the right of the image, z down the image.
Pixel (u, v) = (cx + f * y / x, cy + f * z / x); pixel centres sit on integer coordinates.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from auvdocking.dynamics.vehicle import VehicleState, rotation_body_to_earth
from auvdocking.errors import BehindCamera
from auvdocking.models.scenario import CameraModel

MIN_DEPTH = 1e-9


@dataclass(frozen=True)
class Projection:
    u: float
    v: float
    range: float

    def normalized(self, camera: CameraModel) -> Tuple[float, float]:
        return self.u / (camera.width - 1), self.v / (camera.height - 1)

    def in_frame(self, camera: CameraModel) -> bool:
        return 0.0 <= self.u <= camera.width - 1 and 0.0 <= self.v <= camera.height - 1


def camera_pose(state: VehicleState, camera: CameraModel):
    """Earth-frame camera origin and camera-to-earth rotation."""
    r_body = rotation_body_to_earth(state.eta2)[:3, :3]
    r_mount = rotation_body_to_earth(camera.mount_angles)[:3, :3]
    origin = state.eta1 + r_body @ np.asarray(camera.mount_position, dtype=float)
    return origin, r_body @ r_mount


def project(beacon: np.ndarray, state: VehicleState, camera: CameraModel) -> Projection:
    """Pixel coordinates and line-of-sight range of an earth-frame point."""
    origin, rotation = camera_pose(state, camera)
    p_cam = rotation.T @ (np.asarray(beacon, dtype=float) - origin)
    if p_cam[0] <= MIN_DEPTH:
        raise BehindCamera(f"Point at camera depth {p_cam[0]:.3f} m is not in front of the image plane")
    f = camera.focal
    return Projection(
        u=float(camera.cx + f * p_cam[1] / p_cam[0]),
        v=float(camera.cy + f * p_cam[2] / p_cam[0]),
        range=float(np.linalg.norm(p_cam)),
    )


def unproject(u: float, v: float, distance: float, state: VehicleState, camera: CameraModel) -> np.ndarray:
    """Earth-frame point at the given range along the ray through pixel (u, v)."""
    f = camera.focal
    ray = np.array([1.0, (u - camera.cx) / f, (v - camera.cy) / f])
    ray *= distance / np.linalg.norm(ray)
    origin, rotation = camera_pose(state, camera)
    return origin + rotation @ ray
