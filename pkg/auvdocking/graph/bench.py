# auvdocking/graph/bench.py

"""Scenario matrices, the per-scenario stop rule and the aggregated results table."""

import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import pandas as pd
from tqdm import tqdm

from auvdocking.dataflows.config import get_config, set_config
from auvdocking.dataflows.utils import derive_seed, save_output
from auvdocking.errors import ConfigError
from auvdocking.models.results import BenchRow, EpisodeResult
from auvdocking.models.scenario import CurrentParams, DetectorKind, Scenario, StopRule, WaterModel

from .docking_graph import DockingSimulation, load_detector

logger = logging.getLogger(__name__)

WILSON_Z = 1.959964
BENCH_COLUMNS = list(BenchRow.model_fields)
TABLE_CURRENTS = (0.0, 0.1, 0.25)


def wilson_interval(successes: int, trials: int, z: float = WILSON_Z) -> Tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials == 0:
        return 0.0, 1.0
    p = successes / trials
    denom = 1.0 + z**2 / trials
    centre = (p + z**2 / (2.0 * trials)) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials + z**2 / (4.0 * trials**2)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


def _table_block(prefix: str, water: str) -> List[Scenario]:
    scenarios = []
    i = 1
    for detector in (DetectorKind.NN, DetectorKind.BP):
        for speed in TABLE_CURRENTS:
            scenarios.append(
                Scenario(
                    name=f"{prefix}.{i}",
                    detector=detector,
                    water=WaterModel.jerlov(water),
                    current=CurrentParams(speed=speed, direction="perpendicular"),
                )
            )
            i += 1
    return scenarios


def preset_scenarios(name: str) -> List[Scenario]:
    """t1: turbid 5C block, t2: clear IC block, t3: 7C with a weak random current."""
    name = name.lower()
    if name == "t1":
        return _table_block("T1", "5C")
    if name == "t2":
        return _table_block("T2", "IC")
    if name == "t3":
        return [
            Scenario(
                name="T3.1",
                detector=DetectorKind.NN,
                water=WaterModel.jerlov("7C"),
                current=CurrentParams(speed=0.05, direction="random"),
                stop=StopRule(successes=10),
            )
        ]
    if name == "all":
        return preset_scenarios("t1") + preset_scenarios("t2") + preset_scenarios("t3")
    raise ConfigError(f"Unknown preset {name!r}; expected t1, t2, t3 or all")


_WORKER_SIMS: Dict[str, DockingSimulation] = {}


def _episode_worker(payload: Tuple[Dict[str, Any], Dict[str, Any], int, int, Optional[str]]) -> EpisodeResult:
    scenario_data, config, seed, episode, trajectory = payload
    key = json.dumps([scenario_data, config], sort_keys=True, default=str)
    sim = _WORKER_SIMS.get(key)
    if sim is None:
        sim = DockingSimulation(Scenario.model_validate(scenario_data), config)
        _WORKER_SIMS[key] = sim
    return sim.run_episode(seed, episode=episode, trajectory_path=trajectory)


def run_scenario(
    scenario: Scenario,
    base_seed: int,
    scenario_index: int = 0,
    out_dir: Optional[Union[str, Path]] = None,
    workers: Optional[int] = None,
    progress: Optional[bool] = None,
) -> List[EpisodeResult]:
    """Episodes in index order until the stop rule fires.

    Episodes are dispatched in batches of ``workers``; results past the stopping episode
    are discarded, so the outcome does not depend on the worker count.
    """
    config = get_config()
    workers = workers or config["bench_workers"]
    progress = config["progress"] if progress is None else progress
    stop = scenario.stop
    scenario_data = scenario.model_dump(mode="json")

    def payload(episode: int):
        trajectory = None
        if out_dir is not None:
            trajectory = str(Path(out_dir) / "episodes" / scenario.name / f"episode_{episode:04d}.jsonl")
        return (scenario_data, config, derive_seed(base_seed, scenario_index, episode), episode, trajectory)

    results: List[EpisodeResult] = []
    successes = 0
    bar = tqdm(total=stop.max_episodes, desc=scenario.name, disable=not progress)
    executor = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        episode = 0
        while episode < stop.max_episodes and successes < stop.successes:
            batch = [payload(i) for i in range(episode, min(episode + workers, stop.max_episodes))]
            if executor is None:
                outcomes = [_episode_worker(p) for p in batch]
            else:
                outcomes = list(executor.map(_episode_worker, batch))
            for result in outcomes:
                if successes >= stop.successes:
                    break
                results.append(result)
                successes += int(result.success)
                bar.update(1)
            episode += len(batch)
    finally:
        bar.close()
        if executor is not None:
            executor.shutdown()
    return results


def summarize(scenario: Scenario, results: Sequence[EpisodeResult]) -> BenchRow:
    attempts = sum(r.attempts for r in results)
    successes = sum(int(r.success) for r in results)
    low, high = wilson_interval(successes, attempts)
    n = max(len(results), 1)
    return BenchRow(
        scenario=scenario.name,
        detector=scenario.detector.value,
        water=scenario.water.label,
        current_speed=scenario.current.speed,
        episodes=len(results),
        attempts=attempts,
        successes=successes,
        success_rate=successes / attempts if attempts else 0.0,
        ci_low=low,
        ci_high=high,
        mean_attempts=attempts / n,
        mean_cross_track=sum(r.cross_track_mean for r in results) / n,
        mean_cross_track_terminal=sum(r.cross_track_terminal for r in results) / n,
    )


def run_bench(
    scenarios: Sequence[Scenario],
    base_seed: int = 0,
    out_dir: Optional[Union[str, Path]] = None,
    workers: Optional[int] = None,
    config: Optional[Dict[str, Any]] = None,
    progress: Optional[bool] = None,
) -> pd.DataFrame:
    """Run every scenario to its stop rule; writes bench_results.csv when out_dir is given."""
    if not scenarios:
        raise ConfigError("The scenario matrix is empty")
    if config is not None:
        set_config(config)

    rows = []
    for index, scenario in enumerate(scenarios):
        # Bootstrap NN weights once before workers start
        if scenario.detector == DetectorKind.NN:
            load_detector(scenario)
        results = run_scenario(scenario, base_seed, index, out_dir, workers, progress)
        row = summarize(scenario, results)
        logger.info(
            "%s: %d/%d attempts succeeded (%.3f, CI %.3f-%.3f), cross-track %.2f m",
            row.scenario,
            row.successes,
            row.attempts,
            row.success_rate,
            row.ci_low,
            row.ci_high,
            row.mean_cross_track,
        )
        rows.append(row.model_dump(mode="json"))

    frame = pd.DataFrame(rows, columns=BENCH_COLUMNS)
    if out_dir is not None:
        save_output(frame, "Bench results", Path(out_dir) / "bench_results.csv")
    return frame
