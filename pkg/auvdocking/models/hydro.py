#!/usr/bin/env python3
"""
Hydrodynamic Parameter File Model
Schema of the JSON vehicle parameter file (see auvdocking/configs/iver3.json)
"""

import json
from pathlib import Path
from typing import List, Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from auvdocking.errors import ConfigError


class HydroParamsFile(BaseModel):
    """Vehicle parameter file, schema version 1"""

    model_config = ConfigDict(extra="forbid")

    schema_version: Literal[1] = Field(1, description="Parameter file schema version")
    name: str = Field("iver3", description="Vehicle identifier")
    mass: float = Field(30.0, gt=0.0, description="Dry mass in kg (neutrally buoyant)")
    length: float = Field(1.5, gt=0.0, description="Hull length in m; nose sits length/2 ahead of the origin")
    inertia: List[float] = Field(
        default_factory=lambda: [0.084, 5.67, 5.67],
        description="Principal moments of inertia [Ixx, Iyy, Izz] in kg m^2",
    )
    added_mass: List[float] = Field(
        default_factory=lambda: [1.0, 27.0, 27.0, 0.01, 3.0, 3.0],
        description="Diagonal added mass [-X_udot, -Y_vdot, -Z_wdot, -K_pdot, -M_qdot, -N_rdot]",
    )
    damping: List[float] = Field(
        default_factory=lambda: [-8.0, -100.0, -100.0, -1.0, -20.0, -20.0],
        description="Linear damping [X_u, Y_v, Z_w, K_p, M_q, N_r], SNAME signs (negative)",
    )
    thrust_max: float = Field(20.0, gt=0.0, description="Thruster force limit in N")
    fin_force_max: float = Field(20.0, ge=0.0, description="Per-axis fin force limit in N")
    fin_moment_max: float = Field(10.0, ge=0.0, description="Per-axis fin moment limit in N m")
    speed_cap: float = Field(2.0, gt=0.0, description="Validity bound of linear damping in m/s")
    fin_forces_enabled: bool = Field(True, description="Apply the fin force channel")
    fin_moments_enabled: bool = Field(True, description="Apply the fin moment channel")

    @field_validator("inertia")
    @classmethod
    def _three_positive(cls, v: List[float]) -> List[float]:
        if len(v) != 3 or any(x <= 0.0 for x in v):
            raise ValueError("inertia needs three positive entries")
        return v

    @field_validator("added_mass")
    @classmethod
    def _six_nonnegative(cls, v: List[float]) -> List[float]:
        if len(v) != 6 or any(x < 0.0 for x in v):
            raise ValueError("added_mass needs six non-negative entries")
        return v

    @field_validator("damping")
    @classmethod
    def _six_negative(cls, v: List[float]) -> List[float]:
        if len(v) != 6 or any(x >= 0.0 for x in v):
            raise ValueError("damping needs six strictly negative entries")
        return v

    @classmethod
    def load(cls, path: Union[str, Path]) -> "HydroParamsFile":
        try:
            with open(path, "r", encoding="utf-8") as f:
                return cls.model_validate(json.load(f))
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"Cannot read hydro parameter file {path}: {e}") from e
        except ValidationError as e:
            raise ConfigError(f"Invalid hydro parameter file {path}: {e}") from e

    def to_params(self):
        from auvdocking.dynamics.vehicle import HydroParams

        m_rb = np.diag([self.mass, self.mass, self.mass, *self.inertia])
        return HydroParams(
            m_rb=m_rb,
            m_a=np.diag(self.added_mass),
            damping=np.asarray(self.damping, dtype=float),
            thrust_max=self.thrust_max,
            fin_force_max=self.fin_force_max,
            fin_moment_max=self.fin_moment_max,
            speed_cap=self.speed_cap,
            length=self.length,
            fin_forces_enabled=self.fin_forces_enabled,
            fin_moments_enabled=self.fin_moments_enabled,
        ).validate()
