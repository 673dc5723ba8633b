"""Dubins shortest paths between oriented planar poses.

Poses live in the horizontal NED plane (x north, y east) with heading psi measured
from north towards east. An ``R`` arc turns to starboard (psi increasing), an ``L`` arc
to port. Segment parameters follow the six closed-form words; lengths are reported in
metres.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from auvdocking.dynamics.vehicle import wrap_angle
from auvdocking.errors import DegeneratePath

logger = logging.getLogger(__name__)

WORDS = ("LSL", "RSR", "LSR", "RSL", "RLR", "LRL")
DEFAULT_STEP = 0.5
NUMERIC_TOL = 1e-12


def mod2pi(theta: float) -> float:
    return theta - 2.0 * math.pi * math.floor(theta / (2.0 * math.pi))


# Each word returns normalized (t, p, q) or None when infeasible. alpha and beta are the
# start/goal headings relative to the start->goal bearing, d the distance over the radius.
# Turns that grow psi are R in NED; the formulas below are written for that convention.


def _rsr(alpha, beta, d):
    sa, sb, ca, cb = math.sin(alpha), math.sin(beta), math.cos(alpha), math.cos(beta)
    p_sq = 2.0 + d * d - 2.0 * math.cos(alpha - beta) + 2.0 * d * (sa - sb)
    if p_sq < -NUMERIC_TOL:
        return None
    tmp = math.atan2(cb - ca, d + sa - sb)
    return mod2pi(tmp - alpha), math.sqrt(max(p_sq, 0.0)), mod2pi(beta - tmp)


def _lsl(alpha, beta, d):
    sa, sb, ca, cb = math.sin(alpha), math.sin(beta), math.cos(alpha), math.cos(beta)
    p_sq = 2.0 + d * d - 2.0 * math.cos(alpha - beta) + 2.0 * d * (sb - sa)
    if p_sq < -NUMERIC_TOL:
        return None
    tmp = math.atan2(ca - cb, d - sa + sb)
    return mod2pi(alpha - tmp), math.sqrt(max(p_sq, 0.0)), mod2pi(tmp - beta)


def _rsl(alpha, beta, d):
    sa, sb, ca, cb = math.sin(alpha), math.sin(beta), math.cos(alpha), math.cos(beta)
    p_sq = -2.0 + d * d + 2.0 * math.cos(alpha - beta) + 2.0 * d * (sa + sb)
    if p_sq < -NUMERIC_TOL:
        return None
    p = math.sqrt(max(p_sq, 0.0))
    tmp = math.atan2(-ca - cb, d + sa + sb) - math.atan2(-2.0, p)
    return mod2pi(tmp - alpha), p, mod2pi(tmp - mod2pi(beta))


def _lsr(alpha, beta, d):
    sa, sb, ca, cb = math.sin(alpha), math.sin(beta), math.cos(alpha), math.cos(beta)
    p_sq = -2.0 + d * d + 2.0 * math.cos(alpha - beta) - 2.0 * d * (sa + sb)
    if p_sq < -NUMERIC_TOL:
        return None
    p = math.sqrt(max(p_sq, 0.0))
    tmp = math.atan2(ca + cb, d - sa - sb) - math.atan2(2.0, p)
    return mod2pi(alpha - tmp), p, mod2pi(beta - tmp)


def _lrl(alpha, beta, d):
    sa, sb, ca, cb = math.sin(alpha), math.sin(beta), math.cos(alpha), math.cos(beta)
    tmp = (6.0 - d * d + 2.0 * math.cos(alpha - beta) + 2.0 * d * (sa - sb)) / 8.0
    if abs(tmp) > 1.0 + NUMERIC_TOL:
        return None
    p = mod2pi(2.0 * math.pi - math.acos(min(max(tmp, -1.0), 1.0)))
    t = mod2pi(alpha - math.atan2(ca - cb, d - sa + sb) + p / 2.0)
    return t, p, mod2pi(alpha - beta - t + p)


def _rlr(alpha, beta, d):
    sa, sb, ca, cb = math.sin(alpha), math.sin(beta), math.cos(alpha), math.cos(beta)
    tmp = (6.0 - d * d + 2.0 * math.cos(alpha - beta) + 2.0 * d * (sb - sa)) / 8.0
    if abs(tmp) > 1.0 + NUMERIC_TOL:
        return None
    p = mod2pi(2.0 * math.pi - math.acos(min(max(tmp, -1.0), 1.0)))
    t = mod2pi(-alpha - math.atan2(ca - cb, d + sa - sb) + p / 2.0)
    return t, p, mod2pi(mod2pi(beta) - alpha - t + p)


_WORD_FUNCS: Dict[str, Callable] = {
    "LSL": _lsl,
    "RSR": _rsr,
    "LSR": _lsr,
    "RSL": _rsl,
    "RLR": _rlr,
    "LRL": _lrl,
}


def advance_pose(x: float, y: float, psi: float, segment: str, length: float, radius: float):
    """Move a pose along one L/S/R segment of the given length."""
    if segment == "S":
        return x + length * math.cos(psi), y + length * math.sin(psi), psi
    sign = 1.0 if segment == "R" else -1.0
    psi_next = psi + sign * length / radius
    return (
        x + sign * radius * (math.sin(psi_next) - math.sin(psi)),
        y + sign * radius * (math.cos(psi) - math.cos(psi_next)),
        psi_next,
    )


@dataclass
class DubinsPath:
    """One Dubins word with metric segment lengths and a sampled polyline."""

    word: str
    lengths: Tuple[float, float, float]
    start: Tuple[float, float, float]
    goal: Tuple[float, float, float]
    turn_radius: float
    start_depth: float = 0.0
    goal_depth: float = 0.0
    points: np.ndarray = field(default_factory=lambda: np.zeros((0, 4)))

    @property
    def length(self) -> float:
        return float(sum(self.lengths))

    @property
    def is_empty(self) -> bool:
        return self.length == 0.0

    @cached_property
    def arc_lengths(self) -> np.ndarray:
        """Cumulative distance along the sampled points."""
        steps = np.linalg.norm(np.diff(self.points[:, :2], axis=0), axis=1)
        return np.concatenate([[0.0], np.cumsum(steps)])

    def depth_at(self, s: float) -> float:
        if self.is_empty:
            return self.goal_depth
        frac = min(max(s / self.length, 0.0), 1.0)
        return self.start_depth + frac * (self.goal_depth - self.start_depth)

    def pose_at(self, s: float) -> Tuple[float, float, float]:
        """Analytic (x, y, psi) at arc length s from the start."""
        x, y, psi = self.start
        remaining = min(max(s, 0.0), self.length)
        for segment, seg_len in zip(self.word, self.lengths):
            ds = min(seg_len, remaining)
            x, y, psi = advance_pose(x, y, psi, segment, ds, self.turn_radius)
            remaining -= ds
            if remaining <= 0.0:
                break
        return x, y, float(wrap_angle(psi))

    def end_pose(self) -> Tuple[float, float, float]:
        return self.pose_at(self.length)

    def sample(self, step: float = DEFAULT_STEP) -> np.ndarray:
        """Rows of (x, y, heading, depth) every `step` metres, ending exactly on the goal."""
        if self.is_empty:
            gx, gy, gpsi = self.goal
            return np.array([[gx, gy, wrap_angle(gpsi), self.goal_depth]])
        n = max(int(math.ceil(self.length / step)), 1)
        rows = []
        for s in np.linspace(0.0, self.length, n + 1)[:-1]:
            x, y, psi = self.pose_at(float(s))
            rows.append((x, y, psi, self.depth_at(float(s))))
        gx, gy, gpsi = self.goal
        rows.append((gx, gy, float(wrap_angle(gpsi)), self.goal_depth))
        return np.asarray(rows, dtype=float)


def word_lengths(
    start: Sequence[float], goal: Sequence[float], turn_radius: float
) -> Dict[str, Optional[Tuple[float, float, float]]]:
    """Metric segment lengths of every admissible word (None where infeasible)."""
    x0, y0, psi0 = (float(v) for v in start)
    x1, y1, psi1 = (float(v) for v in goal)
    dx, dy = x1 - x0, y1 - y0
    d = math.hypot(dx, dy) / turn_radius
    theta = mod2pi(math.atan2(dy, dx))
    alpha = mod2pi(psi0 - theta)
    beta = mod2pi(psi1 - theta)

    out = {}
    for word, func in _WORD_FUNCS.items():
        params = func(alpha, beta, d)
        out[word] = None if params is None else tuple(turn_radius * v for v in params)
    return out


def plan_dubins(
    start: Sequence[float],
    goal: Sequence[float],
    turn_radius: float,
    start_depth: float = 0.0,
    goal_depth: float = 0.0,
    step: float = DEFAULT_STEP,
    strict: bool = False,
) -> DubinsPath:
    """Shortest of the six Dubins words from start (x, y, psi) to goal (x, y, psi).

    A request whose start equals its goal yields a zero-length path, or raises
    DegeneratePath when ``strict`` is set.
    """
    if turn_radius <= 0.0:
        raise ValueError(f"turn_radius must be positive, got {turn_radius}")
    if not (np.all(np.isfinite(start)) and np.all(np.isfinite(goal))):
        raise ValueError("Dubins poses must be finite")

    start = tuple(float(v) for v in start)
    goal = tuple(float(v) for v in goal)

    same_position = math.hypot(goal[0] - start[0], goal[1] - start[1]) < 1e-9
    same_heading = abs(float(wrap_angle(goal[2] - start[2]))) < 1e-9
    if same_position and same_heading:
        if strict:
            raise DegeneratePath(f"Start equals goal {goal}")
        logger.warning("Start equals goal %s; returning zero-length path", goal)
        path = DubinsPath("LSL", (0.0, 0.0, 0.0), start, goal, turn_radius, start_depth, goal_depth)
        path.points = path.sample(step)
        return path

    best_word, best_lengths = None, None
    for word, lengths in word_lengths(start, goal, turn_radius).items():
        if lengths is None:
            continue
        if best_lengths is None or sum(lengths) < sum(best_lengths):
            best_word, best_lengths = word, lengths

    path = DubinsPath(best_word, best_lengths, start, goal, turn_radius, start_depth, goal_depth)
    path.points = path.sample(step)
    logger.debug("Dubins %s length %.2f m from %s to %s", best_word, path.length, start, goal)
    return path


def line_path(
    start: Sequence[float],
    goal: Sequence[float],
    depth: float,
    turn_radius: float = 1.0,
    step: float = DEFAULT_STEP,
) -> DubinsPath:
    """Straight two-waypoint path; heading is the start->goal bearing."""
    (x0, y0), (x1, y1) = start[:2], goal[:2]
    heading = math.atan2(y1 - y0, x1 - x0)
    length = math.hypot(x1 - x0, y1 - y0)
    path = DubinsPath(
        "LSL",
        (0.0, length, 0.0),
        (float(x0), float(y0), heading),
        (float(x1), float(y1), heading),
        turn_radius,
        depth,
        depth,
    )
    path.points = path.sample(step)
    return path
