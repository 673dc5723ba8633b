# auvdocking/graph/docking_graph.py

import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np

from auvdocking.dataflows.config import get_config, set_config
from auvdocking.dataflows.image_io import write_ppm
from auvdocking.dataflows.utils import to_json_line
from auvdocking.detection.detectors import BrightestPixelDetector, NeuralDetector, NoDetector
from auvdocking.detection.tinynet import TinyNet, load_weights, save_weights
from auvdocking.detection.trainer import train
from auvdocking.detection.types import Detection
from auvdocking.dynamics.vehicle import ControlInput, ground_velocity, step
from auvdocking.errors import NumericalDivergence
from auvdocking.guidance.autopilot import Autopilot, SteeringCommand, depth_to_pitch
from auvdocking.guidance.dubins import line_path, plan_dubins
from auvdocking.guidance.fsm import DockingStage, docking_fsm_step
from auvdocking.guidance.fusion import fuse_guidance
from auvdocking.guidance.ilos import IlosState, ilos_heading, remaining_length
from auvdocking.guidance.waypoints import stage_waypoints
from auvdocking.models.results import EpisodeResult, StageChange, TerminationReason
from auvdocking.models.scenario import DetectorKind, Scenario, WaterModel
from auvdocking.models.training import DistillConfig
from auvdocking.optics.scene import render_frame

from .conditional_logic import ConditionalLogic, EnvelopeCheck
from .propagation import EpisodeState, Propagator

logger = logging.getLogger(__name__)

FOLLOWED_STAGES = (DockingStage.APPROACH, DockingStage.TERMINAL_HOMING)


def bootstrap_weights(path: Union[str, Path], config: Optional[Dict[str, Any]] = None, seed: int = 0) -> Path:
    """Train a teacher and distill a student on a fresh synthetic dataset; returns the student path."""
    from auvdocking.dataflows.dataset import build_dataset, to_arrays

    config = config or get_config()
    logger.info("No detector weights at %s; training a bootstrap detector", path)
    waters = [WaterModel.jerlov(label) for label in ("IC", "5C", "7C")]
    dataset = build_dataset(config["bootstrap_dataset_size"], waters, seed=seed, augmented=False)
    train_split, val_split = to_arrays(dataset.train), to_arrays(dataset.val)
    epochs = config["bootstrap_epochs"]

    teacher_cfg = DistillConfig(v=0.0, epochs=epochs, seed=seed, arch="teacher")
    teacher, _ = train(TinyNet.build("teacher", seed=seed), train_split, val_split, teacher_cfg)
    save_weights(teacher, config["teacher_weights_path"], training=teacher_cfg.model_dump())

    student_cfg = DistillConfig(epochs=epochs, seed=seed, arch="student")
    student, _ = train(TinyNet.build("student", seed=seed), train_split, val_split, student_cfg, teacher=teacher)
    return save_weights(student, path, training=student_cfg.model_dump())


def load_detector(scenario: Scenario, config: Optional[Dict[str, Any]] = None):
    config = config or get_config()
    if scenario.detector == DetectorKind.BP:
        return BrightestPixelDetector(scenario.bp_threshold)
    if scenario.detector == DetectorKind.NONE:
        return NoDetector()
    path = Path(scenario.weights or config["weights_path"])
    if not path.exists():
        bootstrap_weights(path, config)
    return NeuralDetector(load_weights(path))


class DockingSimulation:
    """Main class that runs seeded docking episodes for one scenario."""

    def __init__(
        self,
        scenario: Scenario,
        config: Optional[Dict[str, Any]] = None,
        detector=None,
    ):
        """Initialize the simulation components.

        Args:
            scenario: Validated scenario
            config: Configuration overrides. If None, uses the current config
            detector: Detector object with a ``detect(image)`` method; built from the scenario when None
        """
        if config is not None:
            set_config(config)
        self.config = get_config()
        self.scenario = scenario

        self.hydro = scenario.hydro_params()
        self.autopilot = Autopilot(scenario.autopilot, self.hydro)
        self.conditional_logic = ConditionalLogic(scenario.envelope, scenario.stop, self.hydro)
        self.propagator = Propagator(scenario)
        self.detector = detector if detector is not None else load_detector(scenario, self.config)

        rate = self.config["dynamics_rate_hz"]
        self.dt = 1.0 / rate
        self.camera_every = max(int(round(rate / self.config["camera_rate_hz"])), 1)
        self.log_every = max(int(round(rate / self.config["trajectory_log_rate_hz"])), 1)

    def _plan(self, st: EpisodeState, stage: DockingStage):
        """Path for a stage from the current dock estimate."""
        g = self.scenario.guidance
        estimate = st.estimator.estimate()
        waypoints = stage_waypoints(estimate, stage, g)
        if stage == DockingStage.TERMINAL_HOMING:
            start, end = waypoints
            st.path = line_path(start.pose, end.pose, start.depth, g.turn_radius, g.path_step)
        else:
            goal = waypoints[0]
            v = st.vehicle
            st.path = plan_dubins(
                (v.eta1[0], v.eta1[1], v.heading),
                goal.pose,
                g.turn_radius,
                start_depth=v.depth,
                goal_depth=goal.depth,
                step=g.path_step,
            )
        st.ilos = IlosState(sigma=st.ilos.sigma, depth=st.vehicle.depth)

    def _change_stage(self, st: EpisodeState, stage: DockingStage, t: float, events: List[dict]):
        logger.debug("t=%.2f %s -> %s", t, st.stage.value, stage.value)
        st.stage = stage
        st.timeline.append({"t": t, "stage": stage.value})
        events.append({"stage": stage.value})
        if stage == DockingStage.TERMINAL_HOMING:
            st.terminal_entries += 1
            st.missed = False
        if stage in (DockingStage.APPROACH, DockingStage.TERMINAL_HOMING):
            self._plan(st, stage)

    def run_episode(
        self,
        seed: int,
        episode: int = 0,
        trajectory_path: Optional[Union[str, Path]] = None,
        frames_dir: Optional[Union[str, Path]] = None,
    ) -> EpisodeResult:
        """Run one episode to a latch, a timeout or the retry cap."""
        s = self.scenario
        g = s.guidance
        logic = self.conditional_logic
        dt = self.dt
        st = self.propagator.create_initial_state(seed)
        st.timeline.append({"t": 0.0, "stage": st.stage.value})

        records: List[str] = []
        pending_fixes: List[dict] = []
        pending_events: List[dict] = []
        cross_track: List[float] = []
        cross_track_terminal: List[float] = []
        axis_offsets: List[float] = []
        detection: Optional[Detection] = None
        final_offset: Optional[float] = None
        reason = TerminationReason.EPISODE_TIMEOUT
        prev_nose = logic.nose(st.vehicle)
        frames = Path(frames_dir) if frames_dir is not None else None

        n_steps = int(math.ceil(s.episode_timeout_s / dt))
        t = 0.0
        for k in range(n_steps):
            t = k * dt
            if k > 0 and k % self.camera_every == 0:
                st.dock = st.drift.step(st.dock, self.camera_every * dt)

            fix = st.channel.poll(t, st.dock)
            if fix is not None:
                st.estimator.update(fix)
                pending_fixes.append(fix.to_record())
                logger.debug("t=%.2f fix %s", t, fix.position)

            if st.waiting_for_fix:
                if fix is None:
                    if t >= s.fix_timeout_s:
                        reason = TerminationReason.NO_FIX_TIMEOUT
                        break
                    st.vehicle = self._advance(st, ControlInput(), seed, t)
                    prev_nose = logic.nose(st.vehicle)
                    self._log(records, k, t, st, pending_fixes, pending_events, detection)
                    continue
                st.waiting_for_fix = False
                self._plan(st, DockingStage.APPROACH_SETUP)
            elif fix is not None and st.stage != DockingStage.MISSED_APPROACH:
                if remaining_length(st.path, st.ilos) >= g.min_replan_length:
                    self._plan(st, st.stage)
                else:
                    logger.debug("t=%.2f replan skipped near the end of %s", t, st.stage.value)

            psi_d, st.ilos = ilos_heading(
                st.vehicle, st.path, g.lookahead, g.kappa, dt, st.ilos, g.integral_limit
            )
            if st.stage in FOLLOWED_STAGES:
                cross_track.append(abs(st.ilos.cross_track))
                if st.stage == DockingStage.TERMINAL_HOMING:
                    cross_track_terminal.append(abs(st.ilos.cross_track))
                    axis_offsets.append(abs(st.dock.lateral_offset(st.vehicle.eta1)))
            path_cmd = SteeringCommand(
                heading=psi_d,
                pitch=depth_to_pitch(st.vehicle.depth, st.ilos.depth, s.autopilot),
                speed=g.surge_speed,
            )

            if st.stage == DockingStage.TERMINAL_HOMING and k % self.camera_every == 0:
                frame, _ = render_frame(st.dock, st.vehicle, s.camera, s.water, st.render_rng, s.optics)
                detection = self.detector.detect(frame)
                if frames is not None:
                    write_ppm(frames / f"frame_{k:07d}.ppm", frame)

            command = fuse_guidance(
                path_cmd, detection, st.stage, st.vehicle, s.camera, g, ground_velocity(st.vehicle, st.current)
            )
            st.vehicle = self._advance(st, self.autopilot.command(st.vehicle, command), seed, t)

            nose = logic.nose(st.vehicle)
            envelope = EnvelopeCheck()
            if st.stage == DockingStage.TERMINAL_HOMING:
                envelope = logic.check_envelope(prev_nose, nose, st.vehicle.heading, st.dock)
                if envelope.crossed:
                    final_offset = envelope.radial_offset
                    st.missed = st.missed or not envelope.inside
                    logger.debug("t=%.2f entrance crossed, offset %.2f m", t, envelope.radial_offset)
            prev_nose = nose

            events = logic.events(
                st.stage,
                st.vehicle,
                st.ilos.complete,
                fix is not None,
                envelope,
                st.missed,
                detection is not None and detection.present >= g.presence_threshold,
            )
            new_stage = docking_fsm_step(st.stage, events)
            if new_stage == DockingStage.MISSED_APPROACH and logic.retries_exhausted(st.terminal_entries):
                reason = TerminationReason.MAX_RETRIES
                self._change_stage(st, new_stage, t + dt, pending_events)
                break
            if new_stage != st.stage:
                self._change_stage(st, new_stage, t + dt, pending_events)
                if new_stage != DockingStage.TERMINAL_HOMING:
                    detection = None
            if new_stage == DockingStage.DOCKED:
                reason = TerminationReason.LATCH
                break
            self._log(records, k, t, st, pending_fixes, pending_events, detection)

        success = reason == TerminationReason.LATCH
        records.append(
            to_json_line(
                {
                    "t": t + dt,
                    "eta": st.vehicle.eta,
                    "V": st.vehicle.velocity,
                    "stage": st.stage.value,
                    "fixes": pending_fixes,
                    "events": pending_events,
                    "detection": detection.to_record() if detection is not None else None,
                    "dock": st.dock.to_record(),
                    "reason": reason.value,
                }
            )
        )
        if trajectory_path is not None:
            trajectory_path = Path(trajectory_path)
            trajectory_path.parent.mkdir(parents=True, exist_ok=True)
            with open(trajectory_path, "w", encoding="utf-8", newline="\n") as f:
                f.write("\n".join(records) + "\n")

        result = EpisodeResult(
            scenario=s.name,
            episode=episode,
            seed=seed,
            success=success,
            reason=reason,
            attempts=max(1, st.terminal_entries),
            duration_s=t + dt,
            cross_track_mean=float(np.mean(cross_track)) if cross_track else 0.0,
            cross_track_max=float(np.max(cross_track)) if cross_track else 0.0,
            cross_track_terminal=float(np.mean(cross_track_terminal)) if cross_track_terminal else 0.0,
            axis_offset_terminal=float(np.mean(axis_offsets)) if axis_offsets else 0.0,
            fixes=st.channel.emitted,
            dropped_fixes=st.channel.dropped,
            final_offset=final_offset,
            timeline=[StageChange(**c) for c in st.timeline],
            trajectory=str(trajectory_path) if trajectory_path is not None else None,
        )
        logger.debug("Episode %d (seed %d): %s after %.1fs", episode, seed, reason.value, result.duration_s)
        return result

    def _advance(self, st: EpisodeState, control: ControlInput, seed: int, t: float):
        try:
            return step(st.vehicle, control, st.current, self.hydro, self.dt)
        except NumericalDivergence as e:
            raise e.with_context(seed, st.stage.value, t) from e

    def _log(self, records, k, t, st, pending_fixes, pending_events, detection):
        if k % self.log_every:
            return
        records.append(
            to_json_line(
                {
                    "t": t,
                    "eta": st.vehicle.eta,
                    "V": st.vehicle.velocity,
                    "stage": st.stage.value,
                    "fixes": list(pending_fixes),
                    "events": list(pending_events),
                    "detection": detection.to_record() if detection is not None else None,
                    "dock": st.dock.to_record(),
                }
            )
        )
        pending_fixes.clear()
        pending_events.clear()


def run_episode(
    scenario: Scenario,
    seed: int,
    trajectory_path: Optional[Union[str, Path]] = None,
    frames_dir: Optional[Union[str, Path]] = None,
    detector=None,
) -> EpisodeResult:
    return DockingSimulation(scenario, detector=detector).run_episode(
        seed, trajectory_path=trajectory_path, frames_dir=frames_dir
    )
