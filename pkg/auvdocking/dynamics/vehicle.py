"""6-DOF rigid-body model of an Iver3-class AUV.

Kinematics and kinetics follow the usual marine-craft formulation

    eta_dot = J(eta2) V (+ current, earth frame, kinematic)
    M V_dot + C(V) V + D V = tau

with M = M_RB + M_A, C(V) = C_RB(V) + C_A(V) built from M with the skew-symmetric
construction, and purely linear damping D = -diag(X_u, Y_v, Z_w, K_p, M_q, N_r).
Centre of gravity and buoyancy coincide and the vehicle is neutrally trimmed, so there
is no restoring term.
"""

import dataclasses
import logging
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from auvdocking.errors import ConfigError, GimbalLock, NumericalDivergence

logger = logging.getLogger(__name__)

GIMBAL_GUARD = 1e-3
MAX_DT = 0.1


def wrap_angle(angle):
    """Wrap to (-pi, pi]."""
    return -((-np.asarray(angle, dtype=float) + np.pi) % (2.0 * np.pi) - np.pi)


def skew(a: np.ndarray) -> np.ndarray:
    """Cross-product matrix: skew(a) @ b == a x b."""
    return np.array(
        [
            [0.0, -a[2], a[1]],
            [a[2], 0.0, -a[0]],
            [-a[1], a[0], 0.0],
        ]
    )


@dataclass
class VehicleState:
    """Earth-fixed pose and body-fixed velocity of the vehicle."""

    eta1: np.ndarray = field(default_factory=lambda: np.zeros(3))
    eta2: np.ndarray = field(default_factory=lambda: np.zeros(3))
    v1: np.ndarray = field(default_factory=lambda: np.zeros(3))
    v2: np.ndarray = field(default_factory=lambda: np.zeros(3))
    t: float = 0.0

    def __post_init__(self):
        self.eta1 = np.asarray(self.eta1, dtype=float).reshape(3)
        self.eta2 = np.asarray(self.eta2, dtype=float).reshape(3)
        self.v1 = np.asarray(self.v1, dtype=float).reshape(3)
        self.v2 = np.asarray(self.v2, dtype=float).reshape(3)
        self.t = float(self.t)

    @property
    def eta(self) -> np.ndarray:
        return np.concatenate([self.eta1, self.eta2])

    @property
    def velocity(self) -> np.ndarray:
        return np.concatenate([self.v1, self.v2])

    @property
    def heading(self) -> float:
        return float(self.eta2[2])

    @property
    def pitch(self) -> float:
        return float(self.eta2[1])

    @property
    def depth(self) -> float:
        return float(self.eta1[2])

    def copy(self) -> "VehicleState":
        return VehicleState(
            self.eta1.copy(), self.eta2.copy(), self.v1.copy(), self.v2.copy(), self.t
        )

    def to_record(self) -> dict:
        return {"t": self.t, "eta": self.eta.tolist(), "V": self.velocity.tolist()}


@dataclass(frozen=True)
class ControlInput:
    """Thruster force plus fin forces/moments, all in the body frame."""

    thrust: float = 0.0
    fin_forces: Sequence[float] = (0.0, 0.0, 0.0)
    fin_moments: Sequence[float] = (0.0, 0.0, 0.0)

    def clamped(self, params: "HydroParams") -> "ControlInput":
        forces = np.clip(np.asarray(self.fin_forces, dtype=float), -params.fin_force_max, params.fin_force_max)
        moments = np.clip(np.asarray(self.fin_moments, dtype=float), -params.fin_moment_max, params.fin_moment_max)
        if not params.fin_forces_enabled:
            forces = np.zeros(3)
        if not params.fin_moments_enabled:
            moments = np.zeros(3)
        return ControlInput(
            thrust=float(np.clip(self.thrust, -params.thrust_max, params.thrust_max)),
            fin_forces=tuple(forces),
            fin_moments=tuple(moments),
        )

    def tau(self) -> np.ndarray:
        """Generalized force vector tau_hydr + tau_thrust."""
        tau = np.zeros(6)
        tau[:3] = self.fin_forces
        tau[3:] = self.fin_moments
        tau[0] += self.thrust
        return tau


@dataclass(frozen=True)
class HydroParams:
    """Mass, added mass, linear damping and actuator limits."""

    m_rb: np.ndarray
    m_a: np.ndarray
    damping: np.ndarray
    thrust_max: float = 20.0
    fin_force_max: float = 20.0
    fin_moment_max: float = 10.0
    speed_cap: float = 2.0
    length: float = 1.5
    fin_forces_enabled: bool = True
    fin_moments_enabled: bool = True

    @cached_property
    def mass_matrix(self) -> np.ndarray:
        m = np.asarray(self.m_rb, dtype=float) + np.asarray(self.m_a, dtype=float)
        return 0.5 * (m + m.T)

    @cached_property
    def mass_matrix_inv(self) -> np.ndarray:
        return np.linalg.inv(self.mass_matrix)

    @cached_property
    def damping_matrix(self) -> np.ndarray:
        return -np.diag(np.asarray(self.damping, dtype=float))

    def validate(self) -> "HydroParams":
        m = np.asarray(self.m_rb, dtype=float) + np.asarray(self.m_a, dtype=float)
        if m.shape != (6, 6):
            raise ConfigError(f"Mass matrices must be 6x6, got {m.shape}")
        if not np.allclose(m, m.T, atol=1e-9):
            raise ConfigError("M = M_RB + M_A must be symmetric")
        if np.any(np.linalg.eigvalsh(0.5 * (m + m.T)) <= 0.0):
            raise ConfigError("M = M_RB + M_A must be positive definite")
        damping = np.asarray(self.damping, dtype=float)
        if damping.shape != (6,) or np.any(damping >= 0.0):
            raise ConfigError("Damping coefficients [X_u, Y_v, Z_w, K_p, M_q, N_r] must be strictly negative")
        if self.speed_cap <= 0.0:
            raise ConfigError("speed_cap must be positive")
        return self

    def without_damping(self) -> "HydroParams":
        return dataclasses.replace(self, damping=np.zeros(6))

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "HydroParams":
        from auvdocking.models.hydro import HydroParamsFile

        return HydroParamsFile.load(path).to_params()


@lru_cache(maxsize=None)
def _cached_default(path: str) -> HydroParams:
    return HydroParams.from_file(path)


def default_hydro_params(path: Optional[str] = None) -> HydroParams:
    """Shipped Iver3-like parameter set (or the file configured in DEFAULT_CONFIG)."""
    if path is None:
        from auvdocking.dataflows.config import get_config

        path = get_config()["hydro_params_file"]
    return _cached_default(str(path))


def rotation_body_to_earth(eta2, guard: float = GIMBAL_GUARD) -> np.ndarray:
    """Block-diagonal J(eta2) = diag(J1, J2) mapping body velocities to eta_dot."""
    phi, theta, psi = (float(a) for a in eta2)
    if abs(theta) >= np.pi / 2.0 - guard:
        raise GimbalLock(theta, guard)

    cphi, sphi = np.cos(phi), np.sin(phi)
    cth, sth, tth = np.cos(theta), np.sin(theta), np.tan(theta)
    cpsi, spsi = np.cos(psi), np.sin(psi)

    j1 = np.array(
        [
            [cpsi * cth, -spsi * cphi + cpsi * sth * sphi, spsi * sphi + cpsi * cphi * sth],
            [spsi * cth, cpsi * cphi + sphi * sth * spsi, -cpsi * sphi + sth * spsi * cphi],
            [-sth, cth * sphi, cth * cphi],
        ]
    )
    j2 = np.array(
        [
            [1.0, sphi * tth, cphi * tth],
            [0.0, cphi, -sphi],
            [0.0, sphi / cth, cphi / cth],
        ]
    )
    j = np.zeros((6, 6))
    j[:3, :3] = j1
    j[3:, 3:] = j2
    return j


def ground_velocity(state: VehicleState, current=None) -> np.ndarray:
    """Earth-frame velocity of the centre of gravity, water motion included."""
    velocity = rotation_body_to_earth(state.eta2)[:3, :3] @ state.v1
    if current is not None:
        velocity = velocity + np.asarray(current, dtype=float).reshape(3)
    return velocity


def coriolis_matrix(mass: np.ndarray, velocity: np.ndarray) -> np.ndarray:
    """Skew-symmetric Coriolis-centripetal matrix of a 6x6 mass matrix."""
    mass = 0.5 * (mass + mass.T)
    v1, v2 = velocity[:3], velocity[3:]
    a1 = mass[:3, :3] @ v1 + mass[:3, 3:] @ v2
    a2 = mass[3:, :3] @ v1 + mass[3:, 3:] @ v2
    c = np.zeros((6, 6))
    c[:3, 3:] = -skew(a1)
    c[3:, :3] = -skew(a1)
    c[3:, 3:] = -skew(a2)
    return c


def kinetic_energy(velocity: np.ndarray, params: HydroParams) -> float:
    return 0.5 * float(velocity @ params.mass_matrix @ velocity)


def _derivative(x: np.ndarray, tau: np.ndarray, current: np.ndarray, params: HydroParams) -> np.ndarray:
    eta2, nu = x[3:6], x[6:]
    eta_dot = rotation_body_to_earth(eta2) @ nu
    eta_dot[:3] += current
    c = coriolis_matrix(np.asarray(params.m_rb, dtype=float), nu) + coriolis_matrix(
        np.asarray(params.m_a, dtype=float), nu
    )
    nu_dot = params.mass_matrix_inv @ (tau - c @ nu - params.damping_matrix @ nu)
    return np.concatenate([eta_dot, nu_dot])


def step(
    state: VehicleState,
    control: ControlInput,
    current,
    params: HydroParams,
    dt: float,
) -> VehicleState:
    """Advance the vehicle by one fixed RK4 step of length dt."""
    if not 0.0 < dt <= MAX_DT:
        raise ValueError(f"dt must lie in (0, {MAX_DT}], got {dt}")

    tau = control.clamped(params).tau()
    current = np.asarray(current, dtype=float).reshape(3)
    x = np.concatenate([state.eta1, state.eta2, state.v1, state.v2])

    k1 = _derivative(x, tau, current, params)
    k2 = _derivative(x + 0.5 * dt * k1, tau, current, params)
    k3 = _derivative(x + 0.5 * dt * k2, tau, current, params)
    k4 = _derivative(x + dt * k3, tau, current, params)
    x_next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    if not np.all(np.isfinite(x_next)):
        raise NumericalDivergence(
            f"Non-finite state after step at t={state.t + dt:.3f}s", state=state
        )

    # Linear damping is only valid below speed_cap
    speed = float(np.linalg.norm(x_next[6:9]))
    if speed > params.speed_cap:
        x_next[6:9] *= params.speed_cap / speed

    x_next[3:6] = wrap_angle(x_next[3:6])
    return VehicleState(x_next[0:3], x_next[3:6], x_next[6:9], x_next[9:12], state.t + dt)
