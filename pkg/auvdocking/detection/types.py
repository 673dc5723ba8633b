"""Detector output shared by the classical and learned detectors."""

from dataclasses import dataclass

ABSENT_POSITION = (0.5, 0.5)


@dataclass(frozen=True)
class Detection:
    """Dock-present probability and normalized image position (origin top-left)."""

    present: float
    x: float = ABSENT_POSITION[0]
    y: float = ABSENT_POSITION[1]

    def __post_init__(self):
        for name in ("present", "x", "y"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"Detection.{name} must lie in [0, 1], got {value}")

    @classmethod
    def absent(cls) -> "Detection":
        return cls(0.0, *ABSENT_POSITION)

    def as_tuple(self):
        return (self.present, self.x, self.y)

    def to_record(self) -> dict:
        return {"present": self.present, "x": self.x, "y": self.y}
