"""Integral line-of-sight path following on a sampled path.

    psi_d     = gamma_p - atan2(e + kappa * sigma, lookahead)
    sigma_dot = lookahead * e / (lookahead**2 + (e + kappa * sigma)**2)

e is the signed cross-track error, positive to starboard of the path.
"""

import math
from dataclasses import dataclass, replace
from typing import Tuple

import numpy as np

from auvdocking.dynamics.vehicle import VehicleState, wrap_angle

from .dubins import DubinsPath

SEARCH_WINDOW = 40


@dataclass(frozen=True)
class IlosState:
    sigma: float = 0.0
    segment: int = 0
    cross_track: float = 0.0
    progress: float = 0.0
    depth: float = 0.0
    complete: bool = False


def _project(path: DubinsPath, position: np.ndarray, first: int):
    pts = path.points
    last = min(first + SEARCH_WINDOW, len(pts) - 1)
    a = pts[first:last, :2]
    v = pts[first + 1 : last + 1, :2] - a
    seg_sq = np.einsum("ij,ij->i", v, v)
    seg_sq = np.where(seg_sq > 0.0, seg_sq, 1.0)
    t = np.einsum("ij,ij->i", position - a, v) / seg_sq
    closest = a + np.clip(t, 0.0, 1.0)[:, None] * v
    dist = np.linalg.norm(position - closest, axis=1)
    k = int(np.argmin(dist))
    return first + k, float(t[k])


def ilos_heading(
    state: VehicleState,
    path: DubinsPath,
    lookahead: float,
    kappa: float,
    dt: float,
    integrator: IlosState,
    integral_limit: float = 5.0,
) -> Tuple[float, IlosState]:
    """Desired heading for the current pose plus the advanced integrator state."""
    pts = path.points
    position = state.eta1[:2]
    if len(pts) < 2:
        goal_heading = float(pts[0, 2]) if len(pts) else state.heading
        depth = float(pts[0, 3]) if len(pts) else state.depth
        return goal_heading, replace(integrator, depth=depth, complete=True)

    seg, t = _project(path, position, min(integrator.segment, len(pts) - 2))
    a, b = pts[seg, :2], pts[seg + 1, :2]
    gamma = math.atan2(b[1] - a[1], b[0] - a[0])
    dx, dy = position - a
    e = -dx * math.sin(gamma) + dy * math.cos(gamma)

    sigma = integrator.sigma
    psi_d = float(wrap_angle(gamma - math.atan2(e + kappa * sigma, lookahead)))

    sigma_dot = lookahead * e / (lookahead**2 + (e + kappa * sigma) ** 2)
    sigma = float(np.clip(sigma + dt * sigma_dot, -integral_limit, integral_limit))

    frac = min(max(t, 0.0), 1.0)
    seg_len = path.arc_lengths[seg + 1] - path.arc_lengths[seg]
    progress = float(path.arc_lengths[seg] + frac * seg_len)
    depth = float(pts[seg, 3] + frac * (pts[seg + 1, 3] - pts[seg, 3]))
    complete = seg == len(pts) - 2 and t >= 1.0

    return psi_d, IlosState(
        sigma=sigma,
        segment=seg,
        cross_track=e,
        progress=progress,
        depth=depth,
        complete=complete,
    )


def remaining_length(path: DubinsPath, integrator: IlosState) -> float:
    if len(path.points) < 2:
        return 0.0
    return max(float(path.arc_lengths[-1]) - integrator.progress, 0.0)
