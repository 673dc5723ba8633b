from .brightest_pixel import brightest_pixel
from .detectors import (
    BrightestPixelDetector,
    NeuralDetector,
    NoDetector,
    build_detector,
    downsample,
    to_input,
)
from .distill import distill_loss, distill_loss_and_grad, supervised_loss
from .tinynet import (
    STUDENT_SPEC,
    TEACHER_SPEC,
    TinyNet,
    forward,
    load_weights,
    read_header,
    save_weights,
)
from .trainer import ArraySplit, evaluate, train
from .types import ABSENT_POSITION, Detection

__all__ = [
    "ABSENT_POSITION",
    "ArraySplit",
    "BrightestPixelDetector",
    "Detection",
    "NeuralDetector",
    "NoDetector",
    "STUDENT_SPEC",
    "TEACHER_SPEC",
    "TinyNet",
    "brightest_pixel",
    "build_detector",
    "distill_loss",
    "distill_loss_and_grad",
    "downsample",
    "evaluate",
    "forward",
    "load_weights",
    "read_header",
    "save_weights",
    "supervised_loss",
    "to_input",
    "train",
]
