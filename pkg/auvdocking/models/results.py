#!/usr/bin/env python3
"""
Result Data Models
Pydantic models for dataset manifests, episode outcomes and benchmark rows
"""

from enum import Enum
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class TerminationReason(str, Enum):
    LATCH = "latch"
    NO_FIX_TIMEOUT = "no_fix_timeout"
    MAX_RETRIES = "max_retries"
    EPISODE_TIMEOUT = "episode_timeout"


class ManifestRecord(BaseModel):
    """One line of a dataset manifest"""

    model_config = ConfigDict(extra="forbid")

    id: str = Field(..., description="Unique frame id, e.g. f000123 or f000123_a04")
    path: str = Field(..., description="PPM path relative to the dataset directory")
    split: Literal["train", "val", "test"]
    present: int = Field(..., ge=0, le=1)
    x: float = Field(..., ge=0.0, le=1.0)
    y: float = Field(..., ge=0.0, le=1.0)
    seed: int = Field(..., description="Per-frame render seed")
    water: str
    range: float = Field(..., ge=0.0, description="Beacon range d in m")
    augmentation: Optional[str] = Field(None, description="Augmentation name; None for source frames")
    source: str = Field(..., description="Id of the unaugmented frame")


class StageChange(BaseModel):
    t: float
    stage: str


class EpisodeResult(BaseModel):
    """Outcome of one docking episode"""

    scenario: str
    episode: int
    seed: int
    success: bool
    reason: TerminationReason
    attempts: int = Field(..., ge=1, description="Terminal-homing entries, at least 1")
    duration_s: float
    cross_track_mean: float = Field(..., description="Mean |cross-track| over path following, m")
    cross_track_max: float = Field(..., description="Max |cross-track| over path following, m")
    cross_track_terminal: float = Field(..., description="Mean |cross-track| in terminal homing, m")
    axis_offset_terminal: float = Field(0.0, description="Mean |offset| from the true dock axis in terminal homing, m")
    fixes: int = 0
    dropped_fixes: int = 0
    final_offset: Optional[float] = Field(None, description="Radial entrance offset at the last crossing, m")
    timeline: List[StageChange] = Field(default_factory=list)
    trajectory: Optional[str] = Field(None, description="Path of the JSONL trajectory log")

    @model_validator(mode="after")
    def _success_means_latch(self):
        if self.success != (self.reason == TerminationReason.LATCH):
            raise ValueError("An episode succeeds exactly when it ends in a latch")
        return self


class BenchRow(BaseModel):
    """Aggregated results for one scenario"""

    scenario: str
    detector: str
    water: str
    current_speed: float
    episodes: int
    attempts: int
    successes: int
    success_rate: float
    ci_low: float
    ci_high: float
    mean_attempts: float
    mean_cross_track: float
    mean_cross_track_terminal: float
