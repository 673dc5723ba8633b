"""Detector wrappers used by the episode loop."""

import logging
from typing import Optional, Tuple

import numpy as np

from auvdocking.errors import ConfigError, ShapeMismatch
from auvdocking.models.scenario import DetectorKind
from auvdocking.optics.raster import RasterImage

from .brightest_pixel import brightest_pixel
from .tinynet import TinyNet
from .types import Detection

logger = logging.getLogger(__name__)


def downsample(data: np.ndarray, shape: Tuple[int, int]) -> np.ndarray:
    """Block-average an (H, W, C) array down to (h, w, C); H and W must be multiples."""
    data = np.asarray(data, dtype=float)
    h, w = shape
    big_h, big_w, c = data.shape
    if big_h % h or big_w % w:
        raise ShapeMismatch(f"Cannot block-average {big_h}x{big_w} to {h}x{w}")
    fh, fw = big_h // h, big_w // w
    return data.reshape(h, fh, w, fw, c).mean(axis=(1, 3))


def to_input(image: RasterImage, input_shape: Tuple[int, int, int]) -> np.ndarray:
    if image.data.shape == tuple(input_shape):
        return image.data
    return downsample(image.data, input_shape[:2])


class BrightestPixelDetector:
    kind = DetectorKind.BP

    def __init__(self, threshold: float):
        self.threshold = threshold

    def detect(self, image: RasterImage) -> Detection:
        return brightest_pixel(image, self.threshold)


class NeuralDetector:
    kind = DetectorKind.NN

    def __init__(self, net: TinyNet):
        self.net = net

    def detect(self, image: RasterImage) -> Detection:
        return self.net.detect(RasterImage(to_input(image, self.net.input_shape)))


class NoDetector:
    """Acoustic-only runs: never reports the dock."""

    kind = DetectorKind.NONE

    def detect(self, image: RasterImage) -> Detection:
        return Detection.absent()


def build_detector(kind: DetectorKind, threshold: float = 0.6, net: Optional[TinyNet] = None):
    if kind == DetectorKind.BP:
        return BrightestPixelDetector(threshold)
    if kind == DetectorKind.NN:
        if net is None:
            raise ConfigError("The neural detector needs a trained network")
        return NeuralDetector(net)
    return NoDetector()
