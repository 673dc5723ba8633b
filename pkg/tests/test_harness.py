import math

import numpy as np
import pandas as pd
import pytest
from pydantic import ValidationError

from auvdocking.dataflows.config import get_config, set_config
from auvdocking.dataflows.utils import read_jsonl
from auvdocking.detection.detectors import BrightestPixelDetector, NoDetector
from auvdocking.errors import ConfigError, NoConvergence
from auvdocking.graph.bench import BENCH_COLUMNS, preset_scenarios, run_bench, run_scenario, wilson_interval
from auvdocking.graph.calibration import beacon_detected, calibrate_water, detection_range, luminance_range
from auvdocking.graph.conditional_logic import ConditionalLogic, EnvelopeCheck
from auvdocking.graph.docking_graph import DockingSimulation
from auvdocking.graph.propagation import Propagator
from auvdocking.guidance.fsm import DockingStage
from auvdocking.guidance.waypoints import DockPose
from auvdocking.models.results import EpisodeResult, TerminationReason
from auvdocking.models.scenario import (
    AcousticChannelParams,
    CameraModel,
    DetectorKind,
    EnvelopeParams,
    RenderParams,
    Scenario,
    SpawnParams,
    StopRule,
    WaterModel,
)


@pytest.fixture
def silent_scenario(make_scenario):
    """Acoustic-only scenario whose channel never delivers a fix."""

    def _make(**overrides):
        data = dict(
            detector=DetectorKind.NONE,
            channel=AcousticChannelParams(p=0.0),
            fix_timeout_s=2.0,
        )
        data.update(overrides)
        return make_scenario(**data)

    return _make


class TestWilson:
    def test_known_interval(self):
        assert wilson_interval(20, 21) == pytest.approx((0.7733, 0.9915), abs=1e-3)

    def test_no_trials(self):
        assert wilson_interval(0, 0) == (0.0, 1.0)

    def test_contains_the_estimate(self):
        for s, n in [(0, 10), (3, 10), (10, 10), (57, 200)]:
            low, high = wilson_interval(s, n)
            assert 0.0 <= low <= s / n <= high <= 1.0


class TestConfig:
    def test_overrides_merge(self):
        set_config({"bench_workers": 3})
        config = get_config()
        assert config["bench_workers"] == 3
        assert config["progress"] is False

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError, match="llm_provider"):
            set_config({"llm_provider": "none"})

    def test_channel_rate_is_a_scenario_setting(self):
        with pytest.raises(ConfigError, match="channel_rate_hz"):
            set_config({"channel_rate_hz": 1.0})
        assert "project_dir" not in get_config()
        assert AcousticChannelParams().rate_hz == pytest.approx(0.33)

    @pytest.mark.parametrize(
        "overrides",
        [{"dynamics_rate_hz": 0.0}, {"camera_rate_hz": 200.0}, {"bench_workers": 0}, {"log_level": "LOUD"}],
    )
    def test_invalid_values_leave_config_untouched(self, overrides):
        before = get_config()
        with pytest.raises(ConfigError):
            set_config(overrides)
        assert get_config() == before


class TestPresets:
    def test_table_blocks(self):
        scenarios = preset_scenarios("t1") + preset_scenarios("t2")
        assert len(scenarios) == 12
        assert [s.name for s in scenarios[:6]] == [f"T1.{i}" for i in range(1, 7)]
        assert {s.water.label for s in preset_scenarios("t1")} == {"5C"}
        assert [s.current.speed for s in preset_scenarios("t2")] == [0.0, 0.1, 0.25] * 2
        assert [s.detector for s in preset_scenarios("t2")] == [DetectorKind.NN] * 3 + [DetectorKind.BP] * 3

    def test_random_current_preset(self):
        (t3,) = preset_scenarios("t3")
        assert t3.name == "T3.1"
        assert t3.water.label == "7C"
        assert (t3.current.speed, t3.current.direction) == (0.05, "random")
        assert len(preset_scenarios("all")) == 13

    def test_unknown_preset(self):
        with pytest.raises(ConfigError):
            preset_scenarios("t9")

    def test_scenario_validation(self, tmp_path):
        with pytest.raises(ConfigError):
            Scenario.from_dict({"name": "x", "warp_drive": True})
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError):
            Scenario.load(path)
        assert Scenario.from_dict({"water": "5C"}).water.label == "5C"


class TestCalibration:
    @pytest.mark.parametrize("label,expected", [("IC", 12.0), ("5C", 6.0), ("7C", 4.0)])
    def test_presets_reach_their_range(self, label, expected):
        assert luminance_range(WaterModel.jerlov(label), 0.6) == pytest.approx(expected, abs=0.25)

    def test_calibration_hits_the_target(self):
        water = calibrate_water(12.0)
        assert detection_range(water) == pytest.approx(12.0, abs=0.25)

    def test_calibrated_water_detects_up_to_the_target(self):
        water = calibrate_water(8.0)
        detector, camera, params = BrightestPixelDetector(0.6), CameraModel(), RenderParams()
        assert beacon_detected(water, 7.7, detector, camera, params)
        assert not beacon_detected(water, 8.3, detector, camera, params)

    def test_range_comes_from_the_detector(self):
        assert detection_range(WaterModel.jerlov("IC"), detector=NoDetector()) == 0.0
        with pytest.raises(NoConvergence):
            calibrate_water(6.0, detector=NoDetector(), max_steps=5)

    def test_shorter_range_needs_murkier_water(self):
        assert calibrate_water(6.0).beta[1] > calibrate_water(12.0).beta[1]

    def test_target_out_of_range(self):
        with pytest.raises(ValueError):
            calibrate_water(0.5)


class TestConditionalLogic:
    def setup_method(self):
        from auvdocking.dynamics.vehicle import default_hydro_params

        self.logic = ConditionalLogic(EnvelopeParams(), StopRule(max_retries=3), default_hydro_params())
        self.dock = DockPose(depth=2.0)

    def test_crossing_inside_the_disk_latches(self):
        check = self.logic.check_envelope(np.array([-0.1, 0.0, 2.0]), np.array([0.1, 0.1, 2.0]), 0.0, self.dock)
        assert check.crossed and check.inside
        assert check.radial_offset == pytest.approx(0.1)

    def test_crossing_outside_the_disk(self):
        check = self.logic.check_envelope(np.array([-0.1, 0.6, 2.0]), np.array([0.1, 0.6, 2.0]), 0.0, self.dock)
        assert check.crossed and not check.inside

    def test_heading_error_too_large(self):
        heading = math.radians(40.0)
        check = self.logic.check_envelope(np.array([-0.1, 0.0, 2.0]), np.array([0.1, 0.0, 2.0]), heading, self.dock)
        assert check.crossed and not check.inside

    def test_no_crossing(self):
        check = self.logic.check_envelope(np.array([-2.0, 0.0, 2.0]), np.array([-1.0, 0.0, 2.0]), 0.0, self.dock)
        assert check == EnvelopeCheck()

    def test_latch_only_in_terminal_homing(self):
        from auvdocking.dynamics.vehicle import VehicleState

        inside = EnvelopeCheck(True, True, 0.0, 0.0)
        state = VehicleState(eta1=[0.0, 0.0, 2.0])
        approach = self.logic.events(DockingStage.APPROACH, state, False, False, inside, False, True)
        assert not approach.latch and not approach.envelope_missed
        terminal = self.logic.events(DockingStage.TERMINAL_HOMING, state, False, False, inside, False, True)
        assert terminal.latch
        assert not terminal.gps_fix

    def test_retry_cap(self):
        assert not self.logic.retries_exhausted(3)
        assert self.logic.retries_exhausted(4)


class TestEpisode:
    def test_spawn_in_front_of_the_dock(self, make_scenario, rng):
        propagator = Propagator(make_scenario())
        dock = DockPose(position=[5.0, -3.0], heading=1.0)
        for _ in range(100):
            state = propagator.spawn(dock, rng)
            along = (state.eta1[:2] - dock.position) @ dock.axis
            assert -15.0 <= along <= -10.0
            assert state.depth == 0.0

    def test_fixed_lateral_offset(self, make_scenario, rng):
        propagator = Propagator(make_scenario(spawn=SpawnParams(lateral_min=3.0, lateral_max=3.0)))
        dock = DockPose(position=[5.0, -3.0], heading=1.0)
        offsets = [dock.lateral_offset(propagator.spawn(dock, rng).eta1) for _ in range(50)]
        assert np.allclose(np.abs(offsets), 3.0)
        assert min(offsets) < 0.0 < max(offsets)
        with pytest.raises(ValidationError):
            SpawnParams(lateral_min=4.0, lateral_max=3.0)

    def test_no_fix_timeout(self, silent_scenario):
        result = DockingSimulation(silent_scenario(fix_timeout_s=5.0)).run_episode(1)
        assert result.reason == TerminationReason.NO_FIX_TIMEOUT
        assert not result.success
        assert result.attempts == 1
        assert 5.0 <= result.duration_s <= 5.1
        assert result.fixes == 0

    def test_same_seed_same_trajectory(self, make_scenario, tmp_path):
        scenario = make_scenario(detector=DetectorKind.NONE, episode_timeout_s=20.0)
        sim = DockingSimulation(scenario)
        a = sim.run_episode(7, trajectory_path=tmp_path / "a.jsonl")
        b = sim.run_episode(7, trajectory_path=tmp_path / "b.jsonl")
        c = sim.run_episode(8, trajectory_path=tmp_path / "c.jsonl")
        assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()
        assert (tmp_path / "a.jsonl").read_bytes() != (tmp_path / "c.jsonl").read_bytes()
        assert a.model_dump(exclude={"trajectory"}) == b.model_dump(exclude={"trajectory"})
        assert c.seed == 8

    def test_trajectory_records(self, make_scenario, tmp_path):
        scenario = make_scenario(detector=DetectorKind.NONE, episode_timeout_s=10.0)
        result = DockingSimulation(scenario).run_episode(2, trajectory_path=tmp_path / "log.jsonl")
        records = read_jsonl(tmp_path / "log.jsonl")
        assert result.reason == TerminationReason.EPISODE_TIMEOUT
        assert records[-1]["reason"] == "episode_timeout"
        assert all(len(r["eta"]) == 6 and len(r["V"]) == 6 for r in records)
        times = [r["t"] for r in records]
        assert times == sorted(times)
        assert any(r["fixes"] for r in records)
        assert result.timeline[0].stage == DockingStage.APPROACH_SETUP.value

    def test_success_requires_latch(self):
        base = dict(
            scenario="x",
            episode=0,
            seed=0,
            attempts=1,
            duration_s=1.0,
            cross_track_mean=0.0,
            cross_track_max=0.0,
            cross_track_terminal=0.0,
        )
        assert EpisodeResult(success=True, reason=TerminationReason.LATCH, **base).success
        with pytest.raises(ValidationError):
            EpisodeResult(success=True, reason=TerminationReason.EPISODE_TIMEOUT, **base)
        with pytest.raises(ValidationError):
            EpisodeResult(success=False, reason=TerminationReason.LATCH, **base)

    @pytest.mark.slow
    def test_nominal_brightest_pixel_docking(self, make_scenario):
        sim = DockingSimulation(make_scenario(episode_timeout_s=600.0))
        for seed in range(3):
            result = sim.run_episode(seed)
            assert result.success, (seed, result.reason)
            assert result.attempts == 1
            assert result.final_offset <= 0.5
            assert result.timeline[-1].stage == DockingStage.DOCKED.value


class TestBench:
    def test_stop_rule_caps_episodes(self, silent_scenario):
        scenario = silent_scenario(stop=StopRule(successes=1, max_episodes=3))
        results = run_scenario(scenario, base_seed=0, workers=1)
        assert [r.episode for r in results] == [0, 1, 2]
        assert len({r.seed for r in results}) == 3

    def test_results_csv(self, silent_scenario, tmp_path):
        scenario = silent_scenario(name="quiet", stop=StopRule(successes=1, max_episodes=2))
        frame = run_bench([scenario], base_seed=3, out_dir=tmp_path, workers=1)
        written = pd.read_csv(tmp_path / "bench_results.csv")
        assert list(written.columns) == BENCH_COLUMNS
        row = written.iloc[0]
        assert (row.scenario, row.episodes, row.attempts, row.successes) == ("quiet", 2, 2, 0)
        assert row.ci_low == 0.0
        assert len(frame) == 1
        assert (tmp_path / "episodes" / "quiet" / "episode_0001.jsonl").exists()

    def test_empty_matrix(self):
        with pytest.raises(ConfigError):
            run_bench([])
