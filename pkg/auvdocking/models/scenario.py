#!/usr/bin/env python3
"""
Scenario Data Models
Pydantic models for scenario files and the parameter blocks they nest
"""

import json
import math
from enum import Enum
from pathlib import Path
from typing import List, Literal, Optional, Union

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)

from auvdocking.errors import ConfigError
from .hydro import HydroParamsFile


class _Block(BaseModel):
    model_config = ConfigDict(extra="forbid")


class DetectorKind(str, Enum):
    NN = "NN"
    BP = "BP"
    NONE = "NONE"


# Shipped water presets, calibrated against the brightest-pixel detector
# (IC ~12 m, 5C ~6 m, 7C ~4 m on-axis range). Red and blue betas are fixed ratios of green.
BETA_RED_RATIO = 2.0
BETA_BLUE_RATIO = 1.25
JERLOV_PRESETS = {
    "IC": {"beta": [0.0895, 0.0448, 0.0560], "beta_inf": [0.10, 0.30, 0.35]},
    "5C": {"beta": [0.212, 0.106, 0.1325], "beta_inf": [0.15, 0.45, 0.40]},
    "7C": {"beta": [0.364, 0.182, 0.227], "beta_inf": [0.20, 0.50, 0.45]},
}


class WaterModel(_Block):
    """Per-channel attenuation, veiling light and style blend weight"""

    label: str = Field("IC", description="IC | 5C | 7C | custom")
    beta: List[float] = Field(
        default_factory=lambda: list(JERLOV_PRESETS["IC"]["beta"]),
        description="Attenuation coefficients [r, g, b] in 1/m",
    )
    beta_inf: List[float] = Field(
        default_factory=lambda: list(JERLOV_PRESETS["IC"]["beta_inf"]),
        description="Veiling light [r, g, b] in [0, 1]",
    )
    k_gen: float = Field(0.7, ge=0.0, le=1.0, description="Weight of the styled source")

    @field_validator("beta")
    @classmethod
    def _beta_nonnegative(cls, v):
        if len(v) != 3 or any(b < 0.0 or not math.isfinite(b) for b in v):
            raise ValueError("beta needs three finite non-negative entries")
        return v

    @field_validator("beta_inf")
    @classmethod
    def _beta_inf_unit(cls, v):
        if len(v) != 3 or any(not 0.0 <= b <= 1.0 for b in v):
            raise ValueError("beta_inf needs three entries in [0, 1]")
        return v

    @property
    def k_style(self) -> float:
        return 1.0 - self.k_gen

    @classmethod
    def jerlov(cls, label: str, **overrides) -> "WaterModel":
        key = label.upper()
        if key not in JERLOV_PRESETS:
            raise ConfigError(f"Unknown water type {label!r}; expected one of {sorted(JERLOV_PRESETS)}")
        preset = JERLOV_PRESETS[key]
        return cls(label=key, beta=list(preset["beta"]), beta_inf=list(preset["beta_inf"]), **overrides)

    @classmethod
    def from_green_beta(cls, beta_g: float, beta_inf: List[float], label: str = "custom", k_gen: float = 0.7):
        return cls(
            label=label,
            beta=[BETA_RED_RATIO * beta_g, beta_g, BETA_BLUE_RATIO * beta_g],
            beta_inf=list(beta_inf),
            k_gen=k_gen,
        )


class CameraModel(_Block):
    """Pinhole camera looking along the body x axis"""

    width: int = Field(128, ge=16, description="Image width in px")
    height: int = Field(128, ge=16, description="Image height in px")
    hfov: float = Field(1.4, gt=0.0, lt=math.pi, description="Horizontal field of view in rad")
    mount_position: List[float] = Field(
        default_factory=lambda: [0.75, 0.0, 0.0], description="Camera origin in the body frame, m"
    )
    mount_angles: List[float] = Field(
        default_factory=lambda: [0.0, 0.0, 0.0], description="Camera roll, pitch, yaw w.r.t. the body, rad"
    )

    @property
    def focal(self) -> float:
        """Focal length in px; a bearing of hfov/2 lands on the last column."""
        return self.cx / math.tan(self.hfov / 2.0)

    @property
    def cx(self) -> float:
        return (self.width - 1) / 2.0

    @property
    def cy(self) -> float:
        return (self.height - 1) / 2.0


class RenderParams(_Block):
    """Geometric render and procedural water texture settings"""

    background: float = Field(0.02, ge=0.0, le=1.0)
    dock_intensity: float = Field(0.15, ge=0.0, le=1.0)
    dock_radius_m: float = Field(0.4, gt=0.0, description="Dock ring radius in m")
    beacon_core_m: float = Field(0.1, gt=0.0, description="Beacon core radius in m")
    beacon_falloff: float = Field(1.5, gt=0.0, description="Gaussian falloff width in core radii")
    texture_noise: float = Field(0.04, ge=0.0, description="Amplitude of low-frequency texture noise")
    glare_probability: float = Field(0.3, ge=0.0, le=1.0)
    glare_max: int = Field(3, ge=0)
    glare_peak: float = Field(0.95, ge=0.0, le=1.0)
    noise_sigma: float = Field(0.02, ge=0.0, description="Additive camera noise after attenuation")


class DriftParams(_Block):
    """Station-keeping drift of the dock"""

    enabled: bool = True
    velocity_sigma: float = Field(0.02, ge=0.0, description="Random-walk velocity scale in m/s")
    yaw_jitter_deg: float = Field(0.1, ge=0.0, description="Yaw-rate jitter in deg/s")
    max_speed: float = Field(0.05, ge=0.0, le=0.05, description="Drift speed cap in m/s")
    max_yaw_rate_deg: float = Field(0.5, ge=0.0, le=0.5, description="Yaw-rate cap in deg/s")
    reversion: float = Field(0.02, ge=0.0, description="Pull back towards the anchor in 1/s")


class DockParams(_Block):
    position: List[float] = Field(default_factory=lambda: [0.0, 0.0], description="[x, y] in m")
    depth: float = Field(2.0, ge=0.0, description="z_dock in m (positive down)")
    heading: float = Field(0.0, description="Dock heading in rad")
    drift: DriftParams = Field(default_factory=DriftParams)


class GuidanceParams(_Block):
    """Waypoint distances, path following gains and optical steering"""

    r_as: float = Field(30.0, gt=0.0, description="Approach-setup goal behind the dock, m")
    r_a: float = Field(20.0, gt=0.0, description="Approach goal before the dock, m")
    r_h1: float = Field(15.0, gt=0.0, description="Terminal line start before the dock, m")
    r_h2: float = Field(5.0, gt=0.0, description="Terminal line end after the dock, m")
    turn_radius: float = Field(5.0, gt=0.0)
    lookahead: float = Field(4.0, gt=0.0, description="ILOS lookahead distance, m")
    kappa: float = Field(0.3, ge=0.0, description="ILOS integral gain")
    integral_limit: float = Field(5.0, gt=0.0, description="Clamp on the ILOS integral state")
    surge_speed: float = Field(1.25, gt=0.0, description="Surge setpoint, m/s")
    path_step: float = Field(0.5, gt=0.0, description="Path sampling interval, m")
    fix_window: int = Field(10, ge=1, description="Acoustic fixes averaged for the dock estimate")
    replan_min_remaining: Optional[float] = Field(
        None, description="Skip replans below this remaining length (default 2 * turn_radius)"
    )
    heading_gain: float = Field(0.5, ge=0.0, description="rad per normalized horizontal offset")
    pitch_gain: float = Field(0.5, ge=0.0, description="rad per normalized vertical offset")
    presence_threshold: float = Field(0.5, ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _ordering(self):
        if not self.r_as > self.r_a > self.r_h1 > 0.0:
            raise ValueError("Require r_as > r_a > r_h1 > 0")
        return self

    @property
    def min_replan_length(self) -> float:
        if self.replan_min_remaining is None:
            return 2.0 * self.turn_radius
        return self.replan_min_remaining


class AutopilotParams(_Block):
    yaw_kp: float = Field(15.0, ge=0.0)
    yaw_kd: float = Field(6.0, ge=0.0)
    pitch_kp: float = Field(15.0, ge=0.0)
    pitch_kd: float = Field(6.0, ge=0.0)
    depth_kp: float = Field(0.3, ge=0.0, description="Pitch demand per metre of depth error, rad/m")
    max_pitch_deg: float = Field(30.0, gt=0.0, lt=80.0)


class AcousticChannelParams(_Block):
    """Rate-limited, noisy, Bernoulli-dropped dock pose messages"""

    rate_hz: float = Field(0.33, gt=0.0)
    p: float = Field(0.9, ge=0.0, le=1.0, description="Emission success probability")
    sigma_xy: List[float] = Field(default_factory=lambda: [2.0, 2.0], description="[sigma_x, sigma_y] in m")
    sigma_heading_deg: float = Field(5.0, ge=0.0)
    seed: Optional[int] = Field(None, description="RNG seed; derived from the episode seed when unset")

    @field_validator("sigma_xy")
    @classmethod
    def _sigma_nonnegative(cls, v):
        if len(v) != 2 or any(s < 0.0 for s in v):
            raise ValueError("sigma_xy needs two non-negative entries")
        return v


class EnvelopeParams(_Block):
    radius: float = Field(0.5, gt=0.0, description="Entrance disk radius, m")
    max_heading_error_deg: float = Field(30.0, gt=0.0, le=90.0)


class CurrentParams(_Block):
    speed: float = Field(0.0, ge=0.0, description="Current magnitude, m/s")
    direction: Literal["perpendicular", "random"] = "perpendicular"


class SpawnParams(_Block):
    distance_min: float = Field(10.0, description="Along-track distance in front of the dock, m")
    distance_max: float = Field(15.0)
    lateral_min: float = Field(0.0, ge=0.0, description="Smallest |lateral offset| from the dock axis, m")
    lateral_max: float = Field(3.0, ge=0.0)
    heading_jitter_deg: float = Field(20.0, ge=0.0)

    @model_validator(mode="after")
    def _range(self):
        if not 10.0 <= self.distance_min <= self.distance_max <= 15.0:
            raise ValueError("Spawn distance must lie within [10, 15] m")
        if self.lateral_min > self.lateral_max:
            raise ValueError("lateral_min must not exceed lateral_max")
        return self


class StopRule(_Block):
    successes: int = Field(20, ge=1)
    max_episodes: int = Field(200, ge=1)
    max_retries: int = Field(3, ge=0)


class Scenario(_Block):
    """One docking test case"""

    schema_version: Literal[1] = 1
    name: str = "scenario"
    detector: DetectorKind = DetectorKind.NN
    bp_threshold: float = Field(0.6, ge=0.0, le=1.0)
    water: WaterModel = Field(default_factory=WaterModel)
    current: CurrentParams = Field(default_factory=CurrentParams)
    spawn: SpawnParams = Field(default_factory=SpawnParams)
    stop: StopRule = Field(default_factory=StopRule)
    channel: AcousticChannelParams = Field(default_factory=AcousticChannelParams)
    guidance: GuidanceParams = Field(default_factory=GuidanceParams)
    autopilot: AutopilotParams = Field(default_factory=AutopilotParams)
    camera: CameraModel = Field(default_factory=CameraModel)
    optics: RenderParams = Field(default_factory=RenderParams)
    dock: DockParams = Field(default_factory=DockParams)
    envelope: EnvelopeParams = Field(default_factory=EnvelopeParams)
    hydro: Optional[Union[str, HydroParamsFile]] = Field(
        None, description="Path to a parameter file or an inline parameter block"
    )
    weights: Optional[str] = Field(None, description="Detector weight file for NN runs")
    seed: int = 0
    fix_timeout_s: float = Field(60.0, gt=0.0)
    episode_timeout_s: float = Field(900.0, gt=0.0)

    @field_validator("water", mode="before")
    @classmethod
    def _water_label(cls, v):
        if isinstance(v, str):
            return WaterModel.jerlov(v)
        return v

    @classmethod
    def from_dict(cls, data: dict) -> "Scenario":
        try:
            return cls.model_validate(data)
        except ValidationError as e:
            raise ConfigError(f"Invalid scenario: {e}") from e

    @classmethod
    def load(cls, path: Union[str, Path]) -> "Scenario":
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"Cannot read scenario file {path}: {e}") from e
        return cls.from_dict(data)

    def hydro_params(self):
        from auvdocking.dynamics.vehicle import HydroParams, default_hydro_params

        if self.hydro is None:
            return default_hydro_params()
        if isinstance(self.hydro, HydroParamsFile):
            return self.hydro.to_params()
        return HydroParams.from_file(self.hydro)
