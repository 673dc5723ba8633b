import logging
from pathlib import Path
from typing import Iterable, List, Optional

import pandas as pd
import questionary
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.table import Table

from auvdocking.models.results import EpisodeResult
from auvdocking.models.scenario import Scenario
from cli.models import BenchPreset

console = Console()

QUESTIONARY_STYLE = questionary.Style(
    [
        ("selected", "fg:cyan noinherit"),
        ("highlighted", "fg:cyan noinherit"),
        ("pointer", "fg:cyan noinherit"),
    ]
)

PRESET_OPTIONS = [
    ("T1 - turbid water (5C), NN and BP at 0 / 0.1 / 0.25 m/s", BenchPreset.T1),
    ("T2 - clear water (IC), NN and BP at 0 / 0.1 / 0.25 m/s", BenchPreset.T2),
    ("T3 - very turbid water (7C), NN, 0.05 m/s random current", BenchPreset.T3),
    ("All of the above", BenchPreset.ALL),
]


def setup_logging(level: str):
    logging.basicConfig(
        level=level.upper(),
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=console, rich_tracebacks=True, show_path=False)],
        force=True,
    )


def show_welcome():
    welcome = (Path(__file__).parent / "static" / "welcome.txt").read_text()
    console.print(
        Panel(
            f"{welcome}\n[bold green]AUV optical docking simulator[/bold green]\n\n"
            "[bold]Stages:[/bold] ApproachSetup → Approach → TerminalHoming → Docked",
            border_style="green",
            expand=False,
        )
    )


def select_preset() -> BenchPreset:
    """Select a benchmark preset using an interactive selection."""
    choice = questionary.select(
        "Select a benchmark preset:",
        choices=[questionary.Choice(display, value=value) for display, value in PRESET_OPTIONS],
        instruction="\n- Use arrow keys to navigate\n- Press Enter to select",
        style=QUESTIONARY_STYLE,
    ).ask()

    if choice is None:
        console.print("\n[red]No preset selected. Exiting...[/red]")
        exit(1)

    return choice


def load_scenarios(paths: Iterable[Path]) -> List[Scenario]:
    return [Scenario.load(p) for p in paths]


def episode_table(result: EpisodeResult) -> Table:
    table = Table(title=f"Episode {result.scenario} (seed {result.seed})", show_header=False)
    table.add_column("field", style="bold")
    table.add_column("value")
    outcome = "[green]docked[/green]" if result.success else f"[red]{result.reason.value}[/red]"
    table.add_row("Outcome", outcome)
    table.add_row("Attempts", str(result.attempts))
    table.add_row("Duration", f"{result.duration_s:.1f} s")
    table.add_row("Cross-track (mean / max)", f"{result.cross_track_mean:.2f} / {result.cross_track_max:.2f} m")
    table.add_row("Cross-track (terminal)", f"{result.cross_track_terminal:.2f} m")
    table.add_row("Acoustic fixes", f"{result.fixes} received, {result.dropped_fixes} dropped")
    if result.final_offset is not None:
        table.add_row("Entrance offset", f"{result.final_offset:.2f} m")
    table.add_row("Stages", " → ".join(change.stage for change in result.timeline))
    return table


def bench_table(frame: pd.DataFrame) -> Table:
    table = Table(title="Docking success rate")
    for column in ("Test", "Detector", "Water", "Current", "Attempts", "Success rate", "95% CI", "Cross-track"):
        table.add_column(column, justify="right" if column not in ("Test", "Detector", "Water") else "left")
    for row in frame.itertuples(index=False):
        table.add_row(
            row.scenario,
            row.detector,
            row.water,
            f"{row.current_speed:.2f} m/s",
            str(row.attempts),
            f"{row.success_rate:.4f}",
            f"{row.ci_low:.2f}-{row.ci_high:.2f}",
            f"{row.mean_cross_track:.2f} m",
        )
    return table


def error_panel(err: Exception, title: Optional[str] = None) -> Panel:
    return Panel(str(err), title=title or type(err).__name__, border_style="red", expand=False)
