"""USBL-style dock pose messages: rate limited, Gaussian noise, Bernoulli drops."""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from auvdocking.dynamics.vehicle import wrap_angle
from auvdocking.models.scenario import AcousticChannelParams

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AcousticFix:
    """Measured dock position [x, y], heading and reception time."""

    position: tuple
    heading: float
    t: float

    def to_record(self) -> dict:
        return {"position": list(self.position), "heading": self.heading, "t": self.t}


class AcousticChannel:
    """One channel per episode; owns its random stream."""

    def __init__(self, params: AcousticChannelParams, seed: Optional[int] = None):
        self.params = params
        if seed is None:
            seed = params.seed
        self.rng = np.random.default_rng(seed)
        self.last_slot: Optional[int] = None
        self.last_t = -math.inf
        self.emitted = 0
        self.dropped = 0

    def poll(self, t: float, true_dock) -> Optional[AcousticFix]:
        """At most one message per 1/rate slot; the first poll of a slot decides it."""
        if t < self.last_t:
            raise ValueError(f"Channel polled backwards in time ({t} < {self.last_t})")
        self.last_t = t

        slot = int(math.floor(t * self.params.rate_hz))
        if self.last_slot is not None and slot <= self.last_slot:
            return None
        self.last_slot = slot

        if self.rng.random() >= self.params.p:
            self.dropped += 1
            logger.debug("Acoustic message dropped at t=%.2f", t)
            return None

        sx, sy = self.params.sigma_xy
        noise = self.rng.standard_normal(3) * np.array([sx, sy, math.radians(self.params.sigma_heading_deg)])
        self.emitted += 1
        return AcousticFix(
            position=(float(true_dock.position[0] + noise[0]), float(true_dock.position[1] + noise[1])),
            heading=float(wrap_angle(true_dock.heading + noise[2])),
            t=float(t),
        )
