import json
import os
import sys
from functools import wraps
from pathlib import Path
from typing import List, Optional

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
import load_env  # noqa: F401  Load .env file

import numpy as np
import typer

from auvdocking.dataflows.config import get_config, set_config
from auvdocking.dataflows.dataset import build_dataset, load_split, write_dataset
from auvdocking.dataflows.image_io import write_ppm
from auvdocking.dataflows.utils import save_output
from auvdocking.detection.tinynet import TinyNet, load_weights, save_weights
from auvdocking.detection.trainer import train as train_net
from auvdocking.dynamics.vehicle import VehicleState
from auvdocking.errors import ConfigError, DockingSimError
from auvdocking.graph.bench import preset_scenarios, run_bench
from auvdocking.graph.calibration import calibrate_water, detection_range
from auvdocking.graph.docking_graph import DockingSimulation
from auvdocking.models.scenario import JERLOV_PRESETS, CameraModel, RenderParams, Scenario, WaterModel
from auvdocking.models.training import DistillConfig
from auvdocking.optics.camera import unproject
from auvdocking.optics.scene import render_frame
from cli.models import Architecture, BenchPreset, TrainingPreset, WaterType
from cli.utils import (
    bench_table,
    console,
    episode_table,
    error_panel,
    load_scenarios,
    select_preset,
    setup_logging,
    show_welcome,
)

app = typer.Typer(
    name="auvdocking",
    help="auvdocking CLI: headless AUV optical docking simulator",
    add_completion=True,  # Enable shell completion
)


def handle_errors(func):
    """Print simulator errors as a panel and exit with status 1."""

    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except DockingSimError as e:
            console.print(error_panel(e))
            raise typer.Exit(code=1)

    return wrapper


def _find_preset_scenario(name: str) -> Scenario:
    for scenario in preset_scenarios("all"):
        if scenario.name.lower() == name.lower():
            return scenario
    raise ConfigError(f"Unknown preset scenario {name!r}; expected one of T1.1-T1.6, T2.1-T2.6, T3.1")


@app.callback()
@handle_errors
def main(
    log_level: str = typer.Option(None, "--log-level", help="Logging level (default from AUVDOCKING_LOG_LEVEL)"),
    no_progress: bool = typer.Option(False, "--no-progress", help="Disable progress bars"),
):
    config = get_config()
    level = log_level or config["log_level"]
    set_config({"log_level": level, "progress": config["progress"] and not no_progress})
    setup_logging(level)


@app.command()
@handle_errors
def episode(
    scenario: Optional[Path] = typer.Option(None, "--scenario", help="Scenario JSON file"),
    preset: Optional[str] = typer.Option(None, "--preset", help="Preset scenario name, e.g. T2.1"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Episode seed (default: scenario seed)"),
    out: Optional[Path] = typer.Option(None, "--out", help="Output directory"),
    weights: Optional[Path] = typer.Option(None, "--weights", help="Detector weight file for NN runs"),
    dump_frames: bool = typer.Option(False, "--dump-frames", help="Write terminal-homing frames as PPM"),
):
    """Run one docking episode and write its trajectory log."""
    if (scenario is None) == (preset is None):
        raise ConfigError("Pass exactly one of --scenario or --preset")
    sc = Scenario.load(scenario) if scenario is not None else _find_preset_scenario(preset)
    if weights is not None:
        sc = sc.model_copy(update={"weights": str(weights)})
    seed = sc.seed if seed is None else seed
    out = out or Path(get_config()["results_dir"])

    sim = DockingSimulation(sc)
    result = sim.run_episode(
        seed,
        trajectory_path=out / f"episode_{seed}.jsonl",
        frames_dir=out / f"frames_{seed}" if dump_frames else None,
    )
    console.print(episode_table(result))
    console.print(f"Trajectory written to [bold]{result.trajectory}[/bold]")


@app.command()
@handle_errors
def bench(
    preset: Optional[BenchPreset] = typer.Option(None, "--preset", help="Scenario matrix preset"),
    scenario: Optional[List[Path]] = typer.Option(None, "--scenario", help="Scenario JSON file(s)"),
    seed: int = typer.Option(0, "--seed", help="Base seed"),
    out: Optional[Path] = typer.Option(None, "--out", help="Output directory"),
    workers: Optional[int] = typer.Option(None, "--workers", min=1, help="Parallel episode workers"),
    weights: Optional[Path] = typer.Option(None, "--weights", help="Detector weight file for NN scenarios"),
    max_episodes: Optional[int] = typer.Option(None, "--max-episodes", min=1, help="Override the episode cap"),
):
    """Run a scenario matrix and write bench_results.csv."""
    if scenario:
        scenarios = load_scenarios(scenario)
    else:
        if preset is None:
            show_welcome()
            preset = select_preset()
        scenarios = preset_scenarios(preset.value)

    updates = {}
    if weights is not None:
        updates["weights"] = str(weights)
    scenarios = [s.model_copy(update=updates) for s in scenarios]
    if max_episodes is not None:
        scenarios = [
            s.model_copy(update={"stop": s.stop.model_copy(update={"max_episodes": max_episodes})})
            for s in scenarios
        ]

    out = out or Path(get_config()["results_dir"])
    frame = run_bench(scenarios, base_seed=seed, out_dir=out, workers=workers)
    console.print(bench_table(frame))
    console.print(f"Results written to [bold]{out / 'bench_results.csv'}[/bold]")


@app.command()
@handle_errors
def calibrate(
    target: float = typer.Option(..., "--target", help="Target detection range in m"),
    water: WaterType = typer.Option(WaterType.IC, "--water", help="Preset whose veiling light is kept"),
    threshold: float = typer.Option(0.6, "--threshold", help="Brightest-pixel threshold"),
    out: Optional[Path] = typer.Option(None, "--out", help="Write the water model as JSON"),
):
    """Fit beta so the brightest-pixel detector reaches the target range."""
    model = calibrate_water(
        target,
        threshold=threshold,
        beta_inf=JERLOV_PRESETS[water.value]["beta_inf"],
        label=f"cal-{target:g}m",
    )
    achieved = detection_range(model, threshold=threshold)
    console.print(f"beta = [{', '.join(f'{b:.4f}' for b in model.beta)}] (range {achieved:.2f} m)")
    if out is not None:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(json.dumps(model.model_dump(), indent=2) + "\n")
        console.print(f"Water model written to [bold]{out}[/bold]")


@app.command()
@handle_errors
def dataset(
    n: int = typer.Option(..., "--n", min=1, help="Number of source frames"),
    out: Path = typer.Option(..., "--out", help="Dataset directory"),
    water: Optional[List[WaterType]] = typer.Option(None, "--water", help="Water type(s); default all presets"),
    seed: int = typer.Option(0, "--seed"),
    no_augment: bool = typer.Option(False, "--no-augment", help="Skip train/val augmentation"),
):
    """Generate, split, augment and write a synthetic detector dataset."""
    labels = [w.value for w in water] if water else list(JERLOV_PRESETS)
    waters = [WaterModel.jerlov(label) for label in labels]
    data = build_dataset(n, waters, seed=seed, augmented=not no_augment)
    manifest = write_dataset(data, out)
    train_n, val_n, test_n = data.sizes()
    console.print(f"train {train_n} / val {val_n} / test {test_n} frames, manifest [bold]{manifest}[/bold]")


@app.command()
@handle_errors
def train(
    data: Path = typer.Option(..., "--data", help="Dataset directory"),
    out: Path = typer.Option(..., "--out", help="Weight file to write"),
    teacher: Optional[Path] = typer.Option(None, "--teacher", help="Teacher weight file for distillation"),
    arch: Architecture = typer.Option(Architecture.STUDENT, "--arch"),
    preset: TrainingPreset = typer.Option(TrainingPreset.DESK, "--preset"),
    v: Optional[float] = typer.Option(None, "--v", help="Teacher-term weight"),
    epochs: Optional[int] = typer.Option(None, "--epochs"),
    lr: Optional[float] = typer.Option(None, "--lr"),
    batch: Optional[int] = typer.Option(None, "--batch"),
    seed: int = typer.Option(0, "--seed"),
):
    """Train a detector and write its weights plus a curves CSV."""
    overrides = {"arch": arch.value, "seed": seed}
    for key, value in (("v", v), ("epochs", epochs), ("learning_rate", lr), ("batch_size", batch)):
        if value is not None:
            overrides[key] = value
    config = DistillConfig.preset(preset.value, **overrides)

    train_split, val_split = load_split(data, "train"), load_split(data, "val")
    teacher_net = load_weights(teacher) if teacher is not None else None
    net, curves = train_net(TinyNet.build(arch.value, seed=seed), train_split, val_split, config, teacher_net)
    save_weights(net, out, training=config.model_dump())
    curves_path = out.with_name(f"{out.stem}_curves.csv")
    save_output(curves, "Training curves", curves_path)

    last = curves.iloc[-1]
    footprint = net.summary()
    console.print(
        f"{arch.value}: {footprint['parameters']} parameters ({footprint['memory_bytes'] // 1024} KiB), "
        f"val L1 {last.val_l1:.4f}, "
        f"accuracy {last.val_accuracy:.3f}; weights [bold]{out}[/bold]"
    )


@app.command()
@handle_errors
def render(
    range_m: float = typer.Option(..., "--range", min=0.5, help="Beacon range in m"),
    out: Path = typer.Option(..., "--out", help="PPM file to write"),
    water: WaterType = typer.Option(WaterType.IC, "--water"),
    seed: int = typer.Option(0, "--seed"),
    x: float = typer.Option(0.5, "--x", min=0.0, max=1.0, help="Normalized beacon column"),
    y: float = typer.Option(0.5, "--y", min=0.0, max=1.0, help="Normalized beacon row"),
):
    """Render one attenuated camera frame with the beacon at the given range."""
    from auvdocking.guidance.waypoints import DockPose

    camera = CameraModel()
    state = VehicleState()
    beacon = unproject(x * (camera.width - 1), y * (camera.height - 1), range_m, state, camera)
    dock = DockPose(position=beacon[:2], depth=beacon[2])
    frame, proj = render_frame(
        dock, state, camera, WaterModel.jerlov(water.value), np.random.default_rng(seed), RenderParams()
    )
    write_ppm(out, frame)
    console.print(f"Beacon at pixel ({proj.u:.1f}, {proj.v:.1f}), range {proj.range:.2f} m; wrote [bold]{out}[/bold]")


if __name__ == "__main__":
    app()
