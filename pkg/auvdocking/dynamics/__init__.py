# auvdocking/dynamics/__init__.py

from .vehicle import (
    ControlInput,
    HydroParams,
    VehicleState,
    coriolis_matrix,
    default_hydro_params,
    ground_velocity,
    kinetic_energy,
    rotation_body_to_earth,
    step,
    wrap_angle,
)

__all__ = [
    "ControlInput",
    "HydroParams",
    "VehicleState",
    "coriolis_matrix",
    "default_hydro_params",
    "ground_velocity",
    "kinetic_energy",
    "rotation_body_to_earth",
    "step",
    "wrap_angle",
]
