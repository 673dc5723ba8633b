"""NHWC numpy layers with explicit backpropagation.

Each layer caches what its backward pass needs during ``forward`` and exposes
``params``/``grads`` lists of equal length.
"""

from typing import List

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


class Layer:
    kind = "layer"

    def __init__(self):
        self.params: List[np.ndarray] = []
        self.grads: List[np.ndarray] = []

    def forward(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def backward(self, grad: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def output_shape(self, input_shape):
        return input_shape

    def spec(self) -> dict:
        return {"type": self.kind}


class Conv2D(Layer):
    """3x3 (or k x k) convolution, stride 1, same padding."""

    kind = "conv"

    def __init__(self, in_channels: int, filters: int, kernel: int = 3):
        super().__init__()
        self.in_channels = in_channels
        self.filters = filters
        self.kernel = kernel
        self.weight = np.zeros((in_channels, kernel, kernel, filters))
        self.bias = np.zeros(filters)
        self.params = [self.weight, self.bias]
        self.grads = [np.zeros_like(self.weight), np.zeros_like(self.bias)]
        self._cols = None
        self._input_shape = None

    @property
    def fan_in(self) -> int:
        return self.in_channels * self.kernel * self.kernel

    def forward(self, x):
        b, h, w, c = x.shape
        pad = self.kernel // 2
        xp = np.pad(x, ((0, 0), (pad, pad), (pad, pad), (0, 0)))
        windows = sliding_window_view(xp, (self.kernel, self.kernel), axis=(1, 2))
        self._cols = windows.reshape(b * h * w, c * self.kernel * self.kernel)
        self._input_shape = x.shape
        out = self._cols @ self.weight.reshape(self.fan_in, self.filters) + self.bias
        return out.reshape(b, h, w, self.filters)

    def backward(self, grad):
        b, h, w, c = self._input_shape
        k = self.kernel
        g = grad.reshape(-1, self.filters)
        self.grads[0][...] = (self._cols.T @ g).reshape(self.weight.shape)
        self.grads[1][...] = g.sum(axis=0)

        dcols = (g @ self.weight.reshape(self.fan_in, self.filters).T).reshape(b, h, w, c, k, k)
        pad = k // 2
        dx = np.zeros((b, h + 2 * pad, w + 2 * pad, c))
        for i in range(k):
            for j in range(k):
                dx[:, i : i + h, j : j + w, :] += dcols[:, :, :, :, i, j]
        return dx[:, pad : pad + h, pad : pad + w, :]

    def output_shape(self, input_shape):
        h, w, _ = input_shape
        return (h, w, self.filters)

    def spec(self):
        return {"type": self.kind, "filters": self.filters, "kernel": self.kernel}


class ReLU(Layer):
    kind = "relu"

    def forward(self, x):
        self._mask = x > 0.0
        return np.where(self._mask, x, 0.0)

    def backward(self, grad):
        return grad * self._mask


class Sigmoid(Layer):
    kind = "sigmoid"

    def forward(self, x):
        self._out = 0.5 * (1.0 + np.tanh(0.5 * x))
        return self._out

    def backward(self, grad):
        return grad * self._out * (1.0 - self._out)


class MaxPool(Layer):
    """Non-overlapping p x p max pooling; the gradient goes to the first maximum."""

    kind = "pool"

    def __init__(self, size: int = 2):
        super().__init__()
        self.size = size

    def forward(self, x):
        b, h, w, c = x.shape
        p = self.size
        if h % p or w % p:
            raise ValueError(f"Pool size {p} does not divide input {h}x{w}")
        blocks = x.reshape(b, h // p, p, w // p, p, c).transpose(0, 1, 3, 5, 2, 4)
        blocks = blocks.reshape(b, h // p, w // p, c, p * p)
        self._argmax = blocks.argmax(axis=-1)
        self._input_shape = x.shape
        return np.take_along_axis(blocks, self._argmax[..., None], axis=-1)[..., 0]

    def backward(self, grad):
        b, h, w, c = self._input_shape
        p = self.size
        blocks = np.zeros((b, h // p, w // p, c, p * p))
        np.put_along_axis(blocks, self._argmax[..., None], grad[..., None], axis=-1)
        blocks = blocks.reshape(b, h // p, w // p, c, p, p).transpose(0, 1, 4, 2, 5, 3)
        return blocks.reshape(b, h, w, c)

    def output_shape(self, input_shape):
        h, w, c = input_shape
        return (h // self.size, w // self.size, c)

    def spec(self):
        return {"type": self.kind, "size": self.size}


class Flatten(Layer):
    kind = "flatten"

    def forward(self, x):
        self._input_shape = x.shape
        return x.reshape(x.shape[0], -1)

    def backward(self, grad):
        return grad.reshape(self._input_shape)

    def output_shape(self, input_shape):
        return (int(np.prod(input_shape)),)


class Dense(Layer):
    kind = "dense"

    def __init__(self, in_features: int, units: int):
        super().__init__()
        self.units = units
        self.weight = np.zeros((in_features, units))
        self.bias = np.zeros(units)
        self.params = [self.weight, self.bias]
        self.grads = [np.zeros_like(self.weight), np.zeros_like(self.bias)]

    @property
    def fan_in(self) -> int:
        return self.weight.shape[0]

    def forward(self, x):
        self._x = x
        return x @ self.weight + self.bias

    def backward(self, grad):
        self.grads[0][...] = self._x.T @ grad
        self.grads[1][...] = grad.sum(axis=0)
        return grad @ self.weight.T

    def output_shape(self, input_shape):
        return (self.units,)

    def spec(self):
        return {"type": self.kind, "units": self.units}


def build_layer(spec: dict, input_shape) -> Layer:
    kind = spec["type"]
    if kind == "conv":
        return Conv2D(input_shape[-1], spec["filters"], spec.get("kernel", 3))
    if kind == "pool":
        return MaxPool(spec.get("size", 2))
    if kind == "dense":
        return Dense(input_shape[-1], spec["units"])
    if kind == "relu":
        return ReLU()
    if kind == "sigmoid":
        return Sigmoid()
    if kind == "flatten":
        return Flatten()
    raise ValueError(f"Unknown layer type {kind!r}")
