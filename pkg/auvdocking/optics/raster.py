"""Fixed-size RGB intensity grid with samples in [0, 1]."""

from dataclasses import dataclass

import numpy as np


@dataclass
class RasterImage:
    data: np.ndarray

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=float)
        if self.data.ndim != 3 or self.data.shape[2] != 3:
            raise ValueError(f"RasterImage needs an H x W x 3 array, got {self.data.shape}")

    @classmethod
    def filled(cls, width: int, height: int, value=0.0) -> "RasterImage":
        data = np.empty((height, width, 3))
        data[...] = value
        return cls(data)

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    def luminance(self) -> np.ndarray:
        return self.data.mean(axis=2)

    def is_valid(self) -> bool:
        return bool(np.all(self.data >= 0.0) and np.all(self.data <= 1.0))

    def to_uint8(self) -> np.ndarray:
        """8-bit quantization, round half up."""
        return np.floor(np.clip(self.data, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)

    @classmethod
    def from_uint8(cls, pixels: np.ndarray) -> "RasterImage":
        return cls(np.asarray(pixels, dtype=float) / 255.0)

    def copy(self) -> "RasterImage":
        return RasterImage(self.data.copy())
