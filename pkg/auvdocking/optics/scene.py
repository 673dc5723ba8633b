"""Camera frames of the dock beacon in water.

The geometric render (dark background, dim dock ring, bright beacon) is blended with a
procedural water texture standing in for a learned style generator, then attenuated
over the beacon range and corrupted with additive camera noise.
"""

import math
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np

from auvdocking.dynamics.vehicle import VehicleState
from auvdocking.errors import BehindCamera
from auvdocking.models.scenario import CameraModel, RenderParams, WaterModel

from .camera import Projection, camera_pose, project
from .raster import RasterImage
from .water import attenuate

WATER_TOP = np.array([0.12, 0.38, 0.42])
WATER_BOTTOM = np.array([0.03, 0.15, 0.20])
TEXTURE_GRID = 5


@lru_cache(maxsize=8)
def _pixel_grid(width: int, height: int):
    yy, xx = np.mgrid[0:height, 0:width].astype(float)
    yy.setflags(write=False)
    xx.setflags(write=False)
    return xx, yy


def _upsample(coarse: np.ndarray, height: int, width: int) -> np.ndarray:
    """Bilinear upsampling of a (gh, gw, c) grid to (height, width, c)."""
    gh, gw = coarse.shape[:2]
    ys = np.linspace(0.0, gh - 1.0, height)
    xs = np.linspace(0.0, gw - 1.0, width)
    y0 = np.minimum(np.floor(ys).astype(int), gh - 2)
    x0 = np.minimum(np.floor(xs).astype(int), gw - 2)
    fy = (ys - y0)[:, None, None]
    fx = (xs - x0)[None, :, None]
    top = coarse[y0][:, x0] * (1.0 - fx) + coarse[y0][:, x0 + 1] * fx
    bottom = coarse[y0 + 1][:, x0] * (1.0 - fx) + coarse[y0 + 1][:, x0 + 1] * fx
    return top * (1.0 - fy) + bottom * fy


def geometric_layers(
    camera: CameraModel,
    beacon_uv: Optional[Tuple[float, float]],
    d: float,
    params: RenderParams,
) -> Tuple[np.ndarray, np.ndarray]:
    """x_sim (H x W x 3) and the beacon intensity layer (H x W)."""
    xx, yy = _pixel_grid(camera.width, camera.height)
    x_sim = np.full((camera.height, camera.width, 3), params.background)
    beacon = np.zeros((camera.height, camera.width))
    if beacon_uv is None:
        return x_sim, beacon

    u, v = beacon_uv
    d = max(d, 1e-3)
    rho = np.hypot(xx - u, yy - v)

    ring_r = params.dock_radius_m * camera.focal / d
    ring_w = max(1.0, 0.15 * ring_r)
    ring = np.where(np.abs(rho - ring_r) <= ring_w / 2.0, params.dock_intensity, 0.0)

    core = max(params.beacon_core_m * camera.focal / d, 1.0)
    sigma = params.beacon_falloff * core
    beacon = np.where(rho <= core, 1.0, np.exp(-((rho - core) ** 2) / (2.0 * sigma**2)))

    x_sim = np.maximum(x_sim, np.maximum(ring, beacon)[:, :, None])
    return x_sim, beacon


def styled_texture(
    camera: CameraModel,
    rng: np.random.Generator,
    params: RenderParams,
    beacon: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Blue-green water texture with optional surface glare; the beacon is screen-blended in.

    This layer stands in for a learned generator's output G(x_sim), so it carries the beacon
    and K_gen = 1 is not a beacon-free texture.
    """
    h, w = camera.height, camera.width
    xx, yy = _pixel_grid(w, h)
    depth_frac = (yy / (h - 1))[:, :, None]
    styled = WATER_TOP + (WATER_BOTTOM - WATER_TOP) * depth_frac

    coarse = rng.standard_normal((TEXTURE_GRID, TEXTURE_GRID, 3)) * params.texture_noise
    styled = styled + _upsample(coarse, h, w)

    if params.glare_max > 0 and rng.random() < params.glare_probability:
        glare = np.zeros((h, w))
        for _ in range(int(rng.integers(1, params.glare_max + 1))):
            gu, gv = rng.uniform(0.0, w), rng.uniform(0.0, 0.3 * h)
            a, b = rng.uniform(0.05 * w, 0.2 * w), rng.uniform(0.02 * h, 0.06 * h)
            angle = rng.uniform(-0.3, 0.3)
            dx, dy = xx - gu, yy - gv
            ex = (dx * math.cos(angle) + dy * math.sin(angle)) / a
            ey = (-dx * math.sin(angle) + dy * math.cos(angle)) / b
            glare = np.maximum(glare, params.glare_peak * np.exp(-(ex**2 + ey**2)))
        styled = np.maximum(styled, glare[:, :, None])

    styled = np.clip(styled, 0.0, 1.0)
    if beacon is not None:
        styled = 1.0 - (1.0 - styled) * (1.0 - beacon[:, :, None])
    return styled


def render_scene(
    camera: CameraModel,
    beacon_uv: Optional[Tuple[float, float]],
    d: float,
    water: WaterModel,
    rng: np.random.Generator,
    params: Optional[RenderParams] = None,
) -> RasterImage:
    """x_uw = K_gen * styled + K_style * x_sim for a beacon at pixel beacon_uv (or none)."""
    params = params or RenderParams()
    x_sim, beacon = geometric_layers(camera, beacon_uv, d, params)
    styled = styled_texture(camera, rng, params, beacon if beacon_uv is not None else None)
    return RasterImage(water.k_gen * styled + water.k_style * x_sim)


def locate_beacon(dock, auv: VehicleState, camera: CameraModel) -> Tuple[Optional[Projection], float]:
    """Projection of the dock entrance (None when behind the camera) and its range."""
    try:
        proj = project(dock.entrance, auv, camera)
        return proj, proj.range
    except BehindCamera:
        origin, _ = camera_pose(auv, camera)
        return None, float(np.linalg.norm(dock.entrance - origin))


def render_unattenuated(
    dock,
    auv: VehicleState,
    camera: CameraModel,
    water: WaterModel,
    rng: np.random.Generator,
    params: Optional[RenderParams] = None,
) -> RasterImage:
    """x_uw for the dock as seen from the vehicle, before attenuation and noise."""
    proj, d = locate_beacon(dock, auv, camera)
    uv = (proj.u, proj.v) if proj is not None else None
    return render_scene(camera, uv, d, water, rng, params)


def add_camera_noise(image: RasterImage, sigma: float, rng: np.random.Generator) -> RasterImage:
    if sigma <= 0.0:
        return image
    return RasterImage(np.clip(image.data + rng.normal(0.0, sigma, image.data.shape), 0.0, 1.0))


def render_frame(
    dock,
    auv: VehicleState,
    camera: CameraModel,
    water: WaterModel,
    rng: np.random.Generator,
    params: Optional[RenderParams] = None,
) -> Tuple[RasterImage, Optional[Projection]]:
    """Camera frame as seen by the vehicle: blend, attenuate over the beacon range, add noise."""
    params = params or RenderParams()
    proj, d = locate_beacon(dock, auv, camera)
    x_uw = render_unattenuated(dock, auv, camera, water, rng, params)
    frame = add_camera_noise(attenuate(x_uw, d, water), params.noise_sigma, rng)
    return frame, proj
