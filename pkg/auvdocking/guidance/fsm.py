"""Docking stage machine."""

from dataclasses import asdict, dataclass
from enum import Enum

from auvdocking.errors import InvalidTransition


class DockingStage(str, Enum):
    APPROACH_SETUP = "ApproachSetup"
    APPROACH = "Approach"
    TERMINAL_HOMING = "TerminalHoming"
    DOCKED = "Docked"
    MISSED_APPROACH = "MissedApproach"


@dataclass(frozen=True)
class StageEvents:
    path_complete: bool = False
    fix_received: bool = False
    gps_fix: bool = False
    latch: bool = False
    optical_lost: bool = False
    envelope_missed: bool = False

    def active(self):
        return sorted(k for k, v in asdict(self).items() if v)


def docking_fsm_step(stage: DockingStage, events: StageEvents) -> DockingStage:
    """Next stage for the events observed in this tick.

    fix_received never changes the stage by itself; the caller replans the current
    stage's remaining path instead.
    """
    if stage == DockingStage.DOCKED:
        raise InvalidTransition(stage, events.active())

    if stage in (DockingStage.APPROACH_SETUP, DockingStage.APPROACH):
        if events.latch or events.envelope_missed:
            raise InvalidTransition(stage, events.active())
        if not events.path_complete:
            return stage
        if stage == DockingStage.APPROACH:
            return DockingStage.TERMINAL_HOMING
        # Surfaced position fix is required before submerging
        return DockingStage.APPROACH if events.gps_fix else stage

    if stage == DockingStage.TERMINAL_HOMING:
        if events.latch:
            return DockingStage.DOCKED
        if events.envelope_missed and events.path_complete:
            return DockingStage.MISSED_APPROACH
        return stage

    if stage == DockingStage.MISSED_APPROACH:
        if events.latch:
            raise InvalidTransition(stage, events.active())
        return DockingStage.APPROACH

    raise InvalidTransition(stage, events.active())
