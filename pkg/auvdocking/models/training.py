#!/usr/bin/env python3
"""
Training Data Models
Pydantic models for detector training runs
"""

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from auvdocking.errors import ConfigError

TRAINING_PRESETS = {
    "desk": {"learning_rate": 1e-3, "batch_size": 8, "epochs": 60},
    "fullscale": {"learning_rate": 4e-6, "batch_size": 8, "epochs": 100},
}


class DistillConfig(BaseModel):
    """Teacher-bounded distillation settings; v = 0 reduces to plain supervised training"""

    model_config = ConfigDict(extra="forbid")

    v: float = Field(0.5, ge=0.0, description="Weight of the teacher-bounded term")
    batch_size: int = Field(8, ge=1, description="Minibatch size B")
    learning_rate: float = Field(1e-3, gt=0.0, description="Fixed SGD step size")
    epochs: int = Field(60, ge=0)
    norm: Literal["l1", "l2"] = Field("l1", description="Per-sample error norm")
    seed: int = Field(0, description="Seed for initialization and batch shuffling")
    arch: Literal["teacher", "student"] = "student"

    @classmethod
    def preset(cls, name: str, **overrides) -> "DistillConfig":
        if name not in TRAINING_PRESETS:
            raise ConfigError(f"Unknown training preset {name!r}; expected one of {sorted(TRAINING_PRESETS)}")
        try:
            return cls(**{**TRAINING_PRESETS[name], **overrides})
        except ValidationError as e:
            raise ConfigError(f"Invalid training settings: {e}") from e
