"""Small convolutional detector: presence probability plus normalized (x, y).

Weight file layout (little endian):

    b"TNW1" | uint32 header length | JSON header | float64 parameters, layer order

The header carries the layer spec, input shape, init seed and training config.
"""

import json
import logging
import struct
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from auvdocking.errors import ConfigError, ShapeMismatch

from .layers import Conv2D, Dense, Layer, build_layer
from .types import Detection

logger = logging.getLogger(__name__)

MAGIC = b"TNW1"
NET_INPUT = (64, 64, 3)

TEACHER_SPEC = [
    {"type": "conv", "filters": 8, "kernel": 3},
    {"type": "relu"},
    {"type": "pool", "size": 2},
    {"type": "conv", "filters": 16, "kernel": 3},
    {"type": "relu"},
    {"type": "pool", "size": 2},
    {"type": "flatten"},
    {"type": "dense", "units": 32},
    {"type": "relu"},
    {"type": "dense", "units": 3},
    {"type": "sigmoid"},
]

STUDENT_SPEC = [
    {"type": "conv", "filters": 8, "kernel": 3},
    {"type": "relu"},
    {"type": "pool", "size": 4},
    {"type": "flatten"},
    {"type": "dense", "units": 16},
    {"type": "relu"},
    {"type": "dense", "units": 3},
    {"type": "sigmoid"},
]

ARCHITECTURES = {"teacher": TEACHER_SPEC, "student": STUDENT_SPEC}


class TinyNet:
    """Sequential stack of numpy layers ending in three sigmoid units."""

    def __init__(
        self,
        spec: Sequence[dict],
        input_shape: Tuple[int, int, int] = NET_INPUT,
        seed: int = 0,
        zero_init: bool = False,
    ):
        self.spec = [dict(s) for s in spec]
        self.input_shape = tuple(int(v) for v in input_shape)
        self.seed = seed
        self.layers: List[Layer] = []

        shape = self.input_shape
        for layer_spec in self.spec:
            layer = build_layer(layer_spec, shape)
            self.layers.append(layer)
            shape = layer.output_shape(shape)
        if shape != (3,):
            raise ConfigError(f"Network must end in 3 outputs, got shape {shape}")
        if self.spec[-1]["type"] != "sigmoid":
            raise ConfigError("Network must end in a sigmoid layer")

        if not zero_init:
            self._he_init(np.random.default_rng(seed))

    @classmethod
    def build(cls, arch: str, seed: int = 0, **kwargs) -> "TinyNet":
        if arch not in ARCHITECTURES:
            raise ConfigError(f"Unknown architecture {arch!r}; expected one of {sorted(ARCHITECTURES)}")
        return cls(ARCHITECTURES[arch], seed=seed, **kwargs)

    def _he_init(self, rng: np.random.Generator):
        for layer in self.layers:
            if isinstance(layer, (Conv2D, Dense)):
                layer.weight[...] = rng.normal(0.0, np.sqrt(2.0 / layer.fan_in), layer.weight.shape)
                layer.bias[...] = 0.0

    @property
    def params(self) -> List[np.ndarray]:
        return [p for layer in self.layers for p in layer.params]

    @property
    def grads(self) -> List[np.ndarray]:
        return [g for layer in self.layers for g in layer.grads]

    def parameter_count(self) -> int:
        return int(sum(p.size for p in self.params))

    def memory_bytes(self) -> int:
        return int(sum(p.nbytes for p in self.params))

    def get_flat(self) -> np.ndarray:
        return np.concatenate([p.ravel() for p in self.params])

    def set_flat(self, flat: np.ndarray):
        flat = np.asarray(flat, dtype=float)
        if flat.size != self.parameter_count():
            raise ShapeMismatch(f"Expected {self.parameter_count()} parameters, got {flat.size}")
        offset = 0
        for p in self.params:
            p[...] = flat[offset : offset + p.size].reshape(p.shape)
            offset += p.size

    def copy(self) -> "TinyNet":
        other = TinyNet(self.spec, self.input_shape, self.seed, zero_init=True)
        other.set_flat(self.get_flat())
        return other

    def forward_batch(self, x: np.ndarray) -> np.ndarray:
        """(B, H, W, C) inputs to (B, 3) outputs in [0, 1]."""
        if x.ndim != 4 or tuple(x.shape[1:]) != self.input_shape:
            raise ShapeMismatch(f"Network expects (B, {self.input_shape}), got {x.shape}")
        out = x
        for layer in self.layers:
            out = layer.forward(out)
        return out

    def backward(self, grad_out: np.ndarray) -> np.ndarray:
        grad = grad_out
        for layer in reversed(self.layers):
            grad = layer.backward(grad)
        return grad

    def sgd_step(self, lr: float):
        for p, g in zip(self.params, self.grads):
            p -= lr * g

    def predict(self, x: np.ndarray, batch_size: int = 64) -> np.ndarray:
        outs = [self.forward_batch(x[i : i + batch_size]) for i in range(0, len(x), batch_size)]
        return np.concatenate(outs, axis=0) if outs else np.zeros((0, 3))

    def detect(self, image) -> Detection:
        """Forward pass on one RasterImage whose size matches the network input."""
        data = np.asarray(image.data, dtype=float)
        if data.shape != self.input_shape:
            raise ShapeMismatch(f"Image {data.shape} does not match network input {self.input_shape}")
        out = self.forward_batch(data[None])[0]
        return Detection(*(float(np.clip(v, 0.0, 1.0)) for v in out))

    def summary(self) -> Dict[str, Union[int, list]]:
        return {
            "layers": self.spec,
            "parameters": self.parameter_count(),
            "memory_bytes": self.memory_bytes(),
        }


def forward(net: TinyNet, image) -> Detection:
    return net.detect(image)


def save_weights(net: TinyNet, path: Union[str, Path], training: Optional[dict] = None) -> Path:
    header = {
        "spec": net.spec,
        "input_shape": list(net.input_shape),
        "seed": net.seed,
        "parameters": net.parameter_count(),
        "training": training or {},
    }
    blob = json.dumps(header, sort_keys=True).encode("utf-8")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<I", len(blob)))
        f.write(blob)
        f.write(net.get_flat().astype("<f8").tobytes())
    logger.info("Saved %d parameters to %s", net.parameter_count(), path)
    return path


def read_header(path: Union[str, Path]) -> dict:
    with open(path, "rb") as f:
        if f.read(4) != MAGIC:
            raise ConfigError(f"{path} is not a TinyNet weight file")
        (length,) = struct.unpack("<I", f.read(4))
        return json.loads(f.read(length).decode("utf-8"))


def load_weights(path: Union[str, Path]) -> TinyNet:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise ConfigError(f"Cannot read weight file {path}: {e}") from e
    if raw[:4] != MAGIC:
        raise ConfigError(f"{path} is not a TinyNet weight file")
    (length,) = struct.unpack("<I", raw[4:8])
    header = json.loads(raw[8 : 8 + length].decode("utf-8"))
    net = TinyNet(header["spec"], tuple(header["input_shape"]), header.get("seed", 0), zero_init=True)
    net.set_flat(np.frombuffer(raw[8 + length :], dtype="<f8"))
    return net
