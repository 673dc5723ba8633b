import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from auvdocking.dataflows.config import reset_config, set_config
from auvdocking.dynamics.vehicle import default_hydro_params
from auvdocking.models.scenario import (
    AcousticChannelParams,
    CurrentParams,
    DetectorKind,
    DockParams,
    DriftParams,
    Scenario,
    WaterModel,
)


@pytest.fixture(autouse=True)
def quiet_config(tmp_path):
    """Fresh config per test: no progress bars, results under tmp_path."""
    reset_config()
    set_config(
        {
            "progress": False,
            "results_dir": str(tmp_path / "results"),
            "weights_path": str(tmp_path / "results" / "weights" / "student.tnw"),
            "teacher_weights_path": str(tmp_path / "results" / "weights" / "teacher.tnw"),
        }
    )
    yield
    reset_config()


@pytest.fixture
def hydro():
    return default_hydro_params()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def make_scenario():
    """Scenario factory with quiet defaults: still dock, clear water, brightest-pixel detector."""

    def _make(**overrides):
        data = dict(
            name="test",
            detector=DetectorKind.BP,
            water=WaterModel.jerlov("IC"),
            current=CurrentParams(speed=0.0),
            dock=DockParams(drift=DriftParams(enabled=False)),
            channel=AcousticChannelParams(p=1.0, sigma_xy=[0.0, 0.0], sigma_heading_deg=0.0),
        )
        data.update(overrides)
        return Scenario(**data)

    return _make
