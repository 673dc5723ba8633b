import math

import numpy as np
import pytest

from auvdocking.errors import DegeneratePath
from auvdocking.guidance.dubins import advance_pose, line_path, mod2pi, plan_dubins, word_lengths


def _right_center(x, y, psi, r):
    return np.array([x - r * math.sin(psi), y + r * math.cos(psi)])


def _left_center(x, y, psi, r):
    return np.array([x + r * math.sin(psi), y - r * math.cos(psi)])


def csc_lengths(start, goal, r):
    """Curve-straight-curve words from tangent-circle geometry."""
    x0, y0, psi0 = start
    x1, y1, psi1 = goal
    out = {}

    for word in ("RSR", "LSL"):
        center = _right_center if word == "RSR" else _left_center
        c1, c2 = center(x0, y0, psi0, r), center(x1, y1, psi1, r)
        delta = c2 - c1
        h = math.atan2(delta[1], delta[0])
        if word == "RSR":
            t, q = mod2pi(h - psi0), mod2pi(psi1 - h)
        else:
            t, q = mod2pi(psi0 - h), mod2pi(h - psi1)
        out[word] = r * (t + q) + float(np.linalg.norm(delta))

    for word in ("RSL", "LSR"):
        first, last = (_right_center, _left_center) if word == "RSL" else (_left_center, _right_center)
        c1, c2 = first(x0, y0, psi0, r), last(x1, y1, psi1, r)
        delta = c2 - c1
        dist = float(np.linalg.norm(delta))
        if dist < 2.0 * r:
            continue
        p = math.sqrt(dist**2 - 4.0 * r**2)
        phi = math.atan2(delta[1], delta[0])
        if word == "RSL":
            h = phi + math.atan2(2.0 * r, p)
            t, q = mod2pi(h - psi0), mod2pi(h - psi1)
        else:
            h = phi - math.atan2(2.0 * r, p)
            t, q = mod2pi(psi0 - h), mod2pi(psi1 - h)
        out[word] = r * (t + q) + p
    return out


def ccc_lengths(start, goal, r):
    """Curve-curve-curve words: both middle circles tangent to the end circles, shortest kept."""
    x0, y0, psi0 = start
    x1, y1, psi1 = goal
    out = {}

    for word in ("LRL", "RLR"):
        center = _left_center if word == "LRL" else _right_center
        c1, c2 = center(x0, y0, psi0, r), center(x1, y1, psi1, r)
        delta = c2 - c1
        dist = float(np.linalg.norm(delta))
        if dist > 4.0 * r or dist == 0.0:
            continue
        normal = np.array([-delta[1], delta[0]]) / dist
        offset = math.sqrt(4.0 * r**2 - (dist / 2.0) ** 2)
        best = math.inf
        for sign in (1.0, -1.0):
            c3 = 0.5 * (c1 + c2) + sign * offset * normal
            a, b = (c3 - c1) / (2.0 * r), (c3 - c2) / (2.0 * r)
            if word == "LRL":
                # left circle point: p = c + r * (-sin psi, cos psi)
                psi_a, psi_b = math.atan2(-a[0], a[1]), math.atan2(-b[0], b[1])
                arcs = mod2pi(psi0 - psi_a), mod2pi(psi_b - psi_a), mod2pi(psi_b - psi1)
            else:
                # right circle point: p = c + r * (sin psi, -cos psi)
                psi_a, psi_b = math.atan2(a[0], -a[1]), math.atan2(b[0], -b[1])
                arcs = mod2pi(psi_a - psi0), mod2pi(psi_a - psi_b), mod2pi(psi1 - psi_b)
            best = min(best, r * sum(arcs))
        out[word] = best
    return out


def six_word_lengths(start, goal, r):
    return {**csc_lengths(start, goal, r), **ccc_lengths(start, goal, r)}


class TestPlanDubins:
    def test_collinear_aligned_is_straight(self):
        path = plan_dubins((0.0, 0.0, 0.0), (10.0, 0.0, 0.0), 5.0)
        assert path.length == pytest.approx(10.0, abs=1e-9)
        assert path.lengths[1] == pytest.approx(10.0, abs=1e-9)

    def test_reversal_in_place(self):
        # A half turn ends 2r to the side, so returning to the same point needs a CCC word:
        # two r*pi/3 arcs around a 5*pi/3 middle arc, 35*pi/3 m in total for r = 5.
        path = plan_dubins((0.0, 0.0, 0.0), (0.0, 0.0, math.pi), 5.0)
        assert path.word in ("RLR", "LRL")
        assert path.length == pytest.approx(35.0 * math.pi / 3.0, abs=1e-9)

    def test_optimal_against_tangent_oracle(self, rng):
        for _ in range(1000):
            start = (rng.uniform(-50, 50), rng.uniform(-50, 50), rng.uniform(-math.pi, math.pi))
            goal = (rng.uniform(-50, 50), rng.uniform(-50, 50), rng.uniform(-math.pi, math.pi))
            r = rng.uniform(1.0, 10.0)
            path = plan_dubins(start, goal, r)

            end = path.end_pose()
            assert math.hypot(end[0] - goal[0], end[1] - goal[1]) < 1e-6
            assert abs(math.remainder(end[2] - goal[2], 2.0 * math.pi)) < 1e-6
            assert min(path.lengths) >= 0.0
            best = min(six_word_lengths(start, goal, r).values())
            assert path.length <= best + 1e-9
            assert path.length >= best - 1e-6

    def test_short_hops_match_the_turning_oracle(self, rng):
        turning = 0
        for _ in range(300):
            r = rng.uniform(2.0, 6.0)
            start = (0.0, 0.0, rng.uniform(-math.pi, math.pi))
            goal = (rng.uniform(-r, r), rng.uniform(-r, r), rng.uniform(-math.pi, math.pi))
            lengths = six_word_lengths(start, goal, r)
            word = min(lengths, key=lengths.get)
            path = plan_dubins(start, goal, r)
            assert path.length == pytest.approx(lengths[word], abs=1e-6)
            runner_up = sorted(lengths.values())[1]
            if word in ("LRL", "RLR") and runner_up - lengths[word] > 1e-6:
                turning += 1
                assert path.word == word
        assert turning > 0

    def test_every_admissible_word_closes(self, rng):
        for _ in range(100):
            start = (0.0, 0.0, rng.uniform(-math.pi, math.pi))
            goal = (rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(-math.pi, math.pi))
            for word, lengths in word_lengths(start, goal, 3.0).items():
                if lengths is None:
                    continue
                x, y, psi = start
                for segment, seg_len in zip(word, lengths):
                    x, y, psi = advance_pose(x, y, psi, segment, seg_len, 3.0)
                assert math.hypot(x - goal[0], y - goal[1]) < 1e-6, word

    def test_sampled_path_closes_exactly(self):
        path = plan_dubins((0.0, 0.0, 0.3), (25.0, -12.0, 2.0), 5.0, start_depth=0.0, goal_depth=2.0)
        np.testing.assert_allclose(path.points[0, :2], [0.0, 0.0], atol=1e-9)
        np.testing.assert_allclose(path.points[-1, :2], [25.0, -12.0], atol=1e-6)
        assert path.points[0, 3] == 0.0
        assert path.points[-1, 3] == 2.0
        assert np.all(np.diff(path.points[:, 3]) >= 0.0)

    def test_degenerate_request(self):
        path = plan_dubins((1.0, 1.0, 0.5), (1.0, 1.0, 0.5), 5.0)
        assert path.length == 0.0
        with pytest.raises(DegeneratePath):
            plan_dubins((1.0, 1.0, 0.5), (1.0, 1.0, 0.5), 5.0, strict=True)

    def test_bad_radius(self):
        with pytest.raises(ValueError):
            plan_dubins((0.0, 0.0, 0.0), (10.0, 0.0, 0.0), 0.0)


def test_line_path_heading_and_length():
    path = line_path((-15.0, 0.0), (5.0, 0.0), 2.0)
    assert path.length == pytest.approx(20.0)
    assert np.all(path.points[:, 2] == 0.0)
    assert np.all(path.points[:, 3] == 2.0)
