import math

import numpy as np
import pytest

from auvdocking.detection.types import Detection
from auvdocking.dynamics.vehicle import VehicleState, ground_velocity, step
from auvdocking.errors import InvalidTransition
from auvdocking.guidance.autopilot import Autopilot, SteeringCommand, depth_to_pitch
from auvdocking.guidance.dubins import line_path
from auvdocking.guidance.fsm import DockingStage, StageEvents, docking_fsm_step
from auvdocking.guidance.fusion import focus_of_expansion, fuse_guidance
from auvdocking.guidance.ilos import IlosState, ilos_heading, remaining_length
from auvdocking.guidance.waypoints import DockDrift, DockEstimator, DockPose, stage_waypoints
from auvdocking.models.scenario import AutopilotParams, CameraModel, DriftParams, GuidanceParams
from auvdocking.sensors.acoustic import AcousticFix

TH = DockingStage.TERMINAL_HOMING


class TestStageWaypoints:
    def test_terminal_line_straddles_the_dock(self):
        params = GuidanceParams(r_h1=15.0, r_h2=5.0)
        start, end = stage_waypoints(DockPose(position=[0.0, 0.0], heading=0.0), TH, params)
        assert (start.x, start.y) == pytest.approx((-15.0, 0.0))
        assert (end.x, end.y) == pytest.approx((5.0, 0.0))

    def test_approach_goal_rotates_with_dock(self):
        dock = DockPose(position=[0.0, 0.0], depth=2.0, heading=math.pi / 2.0)
        (goal,) = stage_waypoints(dock, DockingStage.APPROACH, GuidanceParams(r_a=20.0))
        assert (goal.x, goal.y) == pytest.approx((0.0, -20.0), abs=1e-9)
        assert goal.depth == 2.0
        assert goal.heading == pytest.approx(math.pi / 2.0)

    def test_approach_setup_goal_is_on_the_surface(self):
        dock = DockPose(position=[3.0, 4.0], depth=2.0, heading=0.0)
        (goal,) = stage_waypoints(dock, DockingStage.APPROACH_SETUP, GuidanceParams())
        assert (goal.x, goal.y, goal.depth) == pytest.approx((-27.0, 4.0, 0.0))

    def test_terminal_line_is_on_the_centerline(self, rng):
        params = GuidanceParams()
        for _ in range(100):
            dock = DockPose(position=rng.uniform(-50, 50, 2), heading=rng.uniform(-math.pi, math.pi))
            normal = np.array([-dock.axis[1], dock.axis[0]])
            for wp in stage_waypoints(dock, TH, params):
                assert abs((np.array([wp.x, wp.y]) - dock.position) @ normal) < 1e-9

    def test_new_fix_moves_the_waypoints(self):
        estimator = DockEstimator(window=1, depth=2.0)
        estimator.update(AcousticFix((0.0, 0.0), 0.0, 0.0))
        before = stage_waypoints(estimator.estimate(), DockingStage.APPROACH, GuidanceParams())[0]
        estimator.update(AcousticFix((4.0, 0.0), 0.0, 3.0))
        after = stage_waypoints(estimator.estimate(), DockingStage.APPROACH, GuidanceParams())[0]
        assert after.x - before.x == pytest.approx(4.0)

    def test_stage_without_waypoints(self):
        with pytest.raises(ValueError):
            stage_waypoints(DockPose(), DockingStage.DOCKED, GuidanceParams())

    def test_parameter_ordering_enforced(self):
        with pytest.raises(ValueError):
            GuidanceParams(r_as=10.0, r_a=20.0)


class TestDockModel:
    def test_estimator_averages_a_window(self):
        estimator = DockEstimator(window=2, depth=2.0)
        for x in (0.0, 2.0, 4.0):
            estimator.update(AcousticFix((x, 0.0), 0.0, 0.0))
        assert estimator.estimate().position == pytest.approx([3.0, 0.0])
        assert len(estimator) == 2

    def test_drift_respects_caps(self):
        params = DriftParams(velocity_sigma=1.0, yaw_jitter_deg=10.0)
        anchor = DockPose()
        drift = DockDrift(params, anchor, np.random.default_rng(0))
        dock = anchor
        for _ in range(500):
            dock = drift.step(dock, 0.1)
            assert np.linalg.norm(dock.velocity) <= params.max_speed + 1e-12
            assert abs(dock.yaw_rate) <= math.radians(params.max_yaw_rate_deg) + 1e-12

    def test_disabled_drift_keeps_the_dock(self):
        drift = DockDrift(DriftParams(enabled=False), DockPose(), np.random.default_rng(0))
        dock = DockPose(position=[1.0, 2.0])
        assert drift.step(dock, 0.1) is dock


class TestIlos:
    def setup_method(self):
        self.path = line_path((0.0, 0.0), (100.0, 0.0), 0.0)

    def test_on_path_follows_tangent(self):
        psi_d, _ = ilos_heading(VehicleState(eta1=[5.0, 0.0, 0.0]), self.path, 4.0, 0.3, 0.01, IlosState())
        assert psi_d == pytest.approx(0.0, abs=1e-12)

    def test_starboard_offset_steers_to_port(self):
        psi_d, st = ilos_heading(VehicleState(eta1=[5.0, 1.0, 0.0]), self.path, 4.0, 0.3, 0.01, IlosState())
        assert st.cross_track == pytest.approx(1.0)
        assert psi_d < 0.0
        assert st.sigma > 0.0

    def test_heading_bounded_and_continuous(self):
        offsets = np.linspace(-30.0, 30.0, 601)
        headings = [
            ilos_heading(VehicleState(eta1=[10.0, e, 0.0]), self.path, 4.0, 0.3, 0.01, IlosState())[0]
            for e in offsets
        ]
        assert np.all(np.abs(headings) < math.pi / 2.0)
        assert np.max(np.abs(np.diff(headings))) < 0.05

    def test_integral_clamped(self):
        st = IlosState(sigma=4.99)
        for _ in range(100):
            _, st = ilos_heading(VehicleState(eta1=[5.0, 3.0, 0.0]), self.path, 4.0, 0.3, 1.0, st, 5.0)
        assert st.sigma == 5.0

    def test_completion_and_remaining(self):
        _, st = ilos_heading(VehicleState(eta1=[15.0, 0.0, 0.0]), self.path, 4.0, 0.3, 0.01, IlosState())
        assert remaining_length(self.path, st) == pytest.approx(85.0)
        assert not st.complete
        _, st = ilos_heading(VehicleState(eta1=[101.0, 0.0, 0.0]), self.path, 4.0, 0.3, 0.01, IlosState(segment=190))
        assert st.complete

    @pytest.mark.slow
    def test_integral_action_rejects_cross_current(self, hydro):
        params = AutopilotParams()
        autopilot = Autopilot(params, hydro)
        current = np.array([0.0, 0.1, 0.0])
        path = line_path((0.0, 0.0), (400.0, 0.0), 0.0)
        dt = 0.01

        def steady_error(kappa):
            state = VehicleState(v1=[1.25, 0.0, 0.0])
            ilos = IlosState()
            errors = []
            for k in range(int(150.0 / dt)):
                psi_d, ilos = ilos_heading(state, path, 4.0, kappa, dt, ilos, 5.0)
                cmd = SteeringCommand(psi_d, depth_to_pitch(state.depth, 0.0, params), 1.25)
                state = step(state, autopilot.command(state, cmd), current, hydro, dt)
                if k * dt >= 130.0:
                    errors.append(abs(ilos.cross_track))
            return float(np.mean(errors))

        los, integral = steady_error(0.0), steady_error(0.3)
        assert los > 0.05
        assert integral <= 0.2 * los


class TestFsm:
    def test_latch_docks(self):
        assert docking_fsm_step(TH, StageEvents(latch=True)) == DockingStage.DOCKED

    def test_missed_then_retry(self):
        stage = docking_fsm_step(TH, StageEvents(envelope_missed=True, path_complete=True))
        assert stage == DockingStage.MISSED_APPROACH
        assert docking_fsm_step(stage, StageEvents()) == DockingStage.APPROACH

    def test_docked_is_terminal(self):
        with pytest.raises(InvalidTransition):
            docking_fsm_step(DockingStage.DOCKED, StageEvents())

    def test_surface_fix_required(self):
        setup = DockingStage.APPROACH_SETUP
        assert docking_fsm_step(setup, StageEvents(path_complete=True)) == setup
        assert docking_fsm_step(setup, StageEvents(path_complete=True, gps_fix=True)) == DockingStage.APPROACH

    def test_fix_alone_keeps_stage(self):
        for stage in (DockingStage.APPROACH_SETUP, DockingStage.APPROACH, TH):
            assert docking_fsm_step(stage, StageEvents(fix_received=True)) == stage

    def test_approach_to_terminal(self):
        assert docking_fsm_step(DockingStage.APPROACH, StageEvents(path_complete=True)) == TH

    def test_latch_outside_terminal_is_invalid(self):
        with pytest.raises(InvalidTransition):
            docking_fsm_step(DockingStage.APPROACH, StageEvents(latch=True))

    def test_docked_only_through_terminal_homing(self, rng):
        names = ["path_complete", "fix_received", "gps_fix", "latch", "optical_lost", "envelope_missed"]
        for _ in range(200):
            stage, history = DockingStage.APPROACH_SETUP, [DockingStage.APPROACH_SETUP]
            for _ in range(50):
                events = StageEvents(**{n: bool(rng.random() < 0.3) for n in names})
                try:
                    stage = docking_fsm_step(stage, events)
                except InvalidTransition:
                    continue
                history.append(stage)
                if stage == DockingStage.DOCKED:
                    assert history[-2] == TH
                    break


class TestFusion:
    def setup_method(self):
        self.camera = CameraModel()
        self.params = GuidanceParams()
        self.state = VehicleState(eta2=[0.0, 0.05, 0.7])
        self.path_cmd = SteeringCommand(heading=0.2, pitch=-0.1, speed=1.25)

    def test_centered_detection_holds_attitude(self):
        cmd = fuse_guidance(self.path_cmd, Detection(1.0, 0.5, 0.5), TH, self.state, self.camera, self.params)
        assert cmd.heading == pytest.approx(0.7)
        assert cmd.pitch == pytest.approx(0.05)
        assert cmd.speed == 1.25

    def test_offset_detection_steers_towards_it(self):
        cmd = fuse_guidance(self.path_cmd, Detection(1.0, 0.9, 0.5), TH, self.state, self.camera, self.params)
        assert cmd.heading == pytest.approx(0.7 + 0.5 * 0.4)

    def test_absent_detection_follows_path(self):
        cmd = fuse_guidance(self.path_cmd, Detection.absent(), TH, self.state, self.camera, self.params)
        assert cmd == self.path_cmd

    def test_optics_unused_outside_terminal_homing(self):
        cmd = fuse_guidance(
            self.path_cmd, Detection(1.0, 0.9, 0.1), DockingStage.APPROACH, self.state, self.camera, self.params
        )
        assert cmd == self.path_cmd

    def test_focus_of_expansion_follows_the_ground_track(self):
        state = VehicleState(v1=[1.25, 0.0, 0.0])
        assert focus_of_expansion(state, self.camera, ground_velocity(state)) == pytest.approx((0.5, 0.5))
        drift = ground_velocity(state, [0.0, 0.25, 0.0])
        foe_x, foe_y = focus_of_expansion(state, self.camera, drift)
        assert foe_x == pytest.approx(0.5 + 0.2 * self.camera.focal / (self.camera.width - 1))
        assert foe_y == pytest.approx(0.5)

    def test_focus_of_expansion_falls_back_to_the_centre(self):
        assert focus_of_expansion(self.state, self.camera, None) == (0.5, 0.5)
        assert focus_of_expansion(self.state, self.camera, np.zeros(3)) == (0.5, 0.5)
        backwards = ground_velocity(VehicleState(eta2=[0.0, 0.0, 0.7], v1=[-1.0, 0.0, 0.0]))
        assert focus_of_expansion(self.state, self.camera, backwards) == (0.5, 0.5)

    def test_crossflow_crabs_into_the_current(self):
        state = VehicleState(v1=[1.25, 0.0, 0.0])
        drift = ground_velocity(state, [0.0, 0.25, 0.0])
        foe_x, foe_y = focus_of_expansion(state, self.camera, drift)

        centred = fuse_guidance(self.path_cmd, Detection(1.0, 0.5, 0.5), TH, state, self.camera, self.params, drift)
        assert centred.heading == pytest.approx(0.5 * (0.5 - foe_x))
        assert centred.heading < 0.0

        on_track = Detection(1.0, foe_x, foe_y)
        cmd = fuse_guidance(self.path_cmd, on_track, TH, state, self.camera, self.params, drift)
        assert cmd.heading == pytest.approx(0.0, abs=1e-12)
        assert cmd.pitch == pytest.approx(0.0, abs=1e-12)


class TestAutopilot:
    def test_depth_to_pitch_limited(self):
        params = AutopilotParams()
        assert depth_to_pitch(0.0, 100.0, params) == pytest.approx(-math.radians(30.0))
        assert depth_to_pitch(2.0, 2.0, params) == 0.0

    def test_turns_towards_desired_heading(self, hydro):
        autopilot = Autopilot(AutopilotParams(), hydro)
        control = autopilot.command(VehicleState(), SteeringCommand(heading=0.3, pitch=0.0, speed=1.0))
        assert control.fin_moments[2] > 0.0
        assert control.thrust == pytest.approx(8.0)
