# auvdocking/graph/calibration.py

"""Fit the green-channel attenuation so a detector reaches a target range.

Ranges are measured on rendered frames: the beacon sits on the optical axis at the trial range and
the detector must report it within POSITION_TOLERANCE of its projection. Every trial frame of one
measurement is drawn from the same seed, so texture, glare and camera noise stay fixed while only
the range changes.
"""

import logging
from typing import List, Optional

import numpy as np

from auvdocking.detection.detectors import BrightestPixelDetector
from auvdocking.dynamics.vehicle import VehicleState
from auvdocking.errors import NoConvergence
from auvdocking.guidance.waypoints import DockPose
from auvdocking.models.scenario import JERLOV_PRESETS, CameraModel, RenderParams, WaterModel
from auvdocking.optics.camera import unproject
from auvdocking.optics.scene import render_frame
from auvdocking.optics.water import beacon_luminance

logger = logging.getLogger(__name__)

MAX_STEPS = 50
RANGE_TOLERANCE = 0.25
RANGE_RESOLUTION = 0.01
MIN_RANGE = 0.5
MAX_RANGE = 100.0
SEARCH_MARGIN = 5.0
POSITION_TOLERANCE = 0.05
BETA_BOUNDS = (1e-4, 5.0)


def luminance_range(water: WaterModel, threshold: float, max_range: float = MAX_RANGE) -> float:
    """Largest range at which a full-intensity source, attenuated alone, clears the threshold."""
    if beacon_luminance(water, 0.0) < threshold:
        return 0.0
    if beacon_luminance(water, max_range) >= threshold:
        return max_range
    lo, hi = 0.0, max_range
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if beacon_luminance(water, mid) >= threshold:
            lo = mid
        else:
            hi = mid
    return lo


def beacon_detected(
    water: WaterModel,
    d: float,
    detector,
    camera: CameraModel,
    params: RenderParams,
    seed: int = 0,
) -> bool:
    """Whether the detector finds an on-axis beacon at range d in a rendered frame."""
    state = VehicleState()
    point = unproject(camera.cx, camera.cy, d, state, camera)
    dock = DockPose(position=point[:2], depth=point[2])
    frame, proj = render_frame(dock, state, camera, water, np.random.default_rng(seed), params)
    det = detector.detect(frame)
    if det.present < 0.5:
        return False
    u, v = proj.normalized(camera)
    return abs(det.x - u) <= POSITION_TOLERANCE and abs(det.y - v) <= POSITION_TOLERANCE


def detection_range(
    water: WaterModel,
    detector=None,
    camera: Optional[CameraModel] = None,
    params: Optional[RenderParams] = None,
    threshold: float = 0.6,
    seed: int = 0,
    max_range: float = MAX_RANGE,
) -> float:
    """Maximum on-axis range at which the detector still finds the beacon (brightest pixel by default)."""
    detector = detector or BrightestPixelDetector(threshold)
    camera = camera or CameraModel()
    params = params or RenderParams()

    def sees(d: float) -> bool:
        return beacon_detected(water, d, detector, camera, params, seed)

    if not sees(MIN_RANGE):
        return 0.0
    hi = min(luminance_range(water, threshold, max_range) + SEARCH_MARGIN, max_range)
    if sees(hi):
        if hi >= max_range or sees(max_range):
            return max_range
        hi = max_range
    lo = MIN_RANGE
    while hi - lo > RANGE_RESOLUTION:
        mid = 0.5 * (lo + hi)
        if sees(mid):
            lo = mid
        else:
            hi = mid
    return lo


def calibrate_water(
    target_range: float,
    detector=None,
    camera: Optional[CameraModel] = None,
    threshold: float = 0.6,
    beta_inf: Optional[List[float]] = None,
    label: str = "custom",
    k_gen: float = 0.7,
    params: Optional[RenderParams] = None,
    seed: int = 0,
    tolerance: float = RANGE_TOLERANCE,
    max_steps: int = MAX_STEPS,
) -> WaterModel:
    """Bisect beta_g until the detector's range on rendered frames is within tolerance of the target.

    Red and blue coefficients follow beta_g by fixed ratios.
    """
    if not 1.0 <= target_range <= 20.0:
        raise ValueError(f"Target range must lie in [1, 20] m, got {target_range}")
    if beta_inf is None:
        beta_inf = JERLOV_PRESETS["IC"]["beta_inf"]
    detector = detector or BrightestPixelDetector(threshold)

    lo, hi = BETA_BOUNDS
    achieved = None
    for i in range(max_steps):
        beta_g = 0.5 * (lo + hi)
        water = WaterModel.from_green_beta(beta_g, beta_inf, label=label, k_gen=k_gen)
        achieved = detection_range(water, detector, camera, params, threshold, seed)
        logger.debug("step %d: beta_g=%.5f range=%.3f m", i, beta_g, achieved)
        if abs(achieved - target_range) <= tolerance:
            logger.info("Calibrated beta_g=%.4f for %.2f m (achieved %.2f m)", beta_g, target_range, achieved)
            return water
        # range falls as turbidity rises
        if achieved > target_range:
            lo = beta_g
        else:
            hi = beta_g
    raise NoConvergence(
        f"No beta within {tolerance} m of {target_range} m after {max_steps} steps (last {achieved:.3f} m)"
    )
