from .hydro import HydroParamsFile
from .results import BenchRow, EpisodeResult, ManifestRecord, StageChange, TerminationReason
from .scenario import (
    JERLOV_PRESETS,
    AcousticChannelParams,
    AutopilotParams,
    CameraModel,
    CurrentParams,
    DetectorKind,
    DockParams,
    DriftParams,
    EnvelopeParams,
    GuidanceParams,
    RenderParams,
    Scenario,
    SpawnParams,
    StopRule,
    WaterModel,
)
from .training import TRAINING_PRESETS, DistillConfig

__all__ = [
    "AcousticChannelParams",
    "AutopilotParams",
    "BenchRow",
    "CameraModel",
    "CurrentParams",
    "DetectorKind",
    "DistillConfig",
    "DockParams",
    "DriftParams",
    "EnvelopeParams",
    "EpisodeResult",
    "GuidanceParams",
    "HydroParamsFile",
    "JERLOV_PRESETS",
    "ManifestRecord",
    "RenderParams",
    "Scenario",
    "SpawnParams",
    "StageChange",
    "StopRule",
    "TRAINING_PRESETS",
    "TerminationReason",
    "WaterModel",
]
