import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from auvdocking.dataflows.config import get_config
from auvdocking.errors import NonFiniteLoss
from auvdocking.models.training import DistillConfig

from .distill import distill_loss_and_grad
from .tinynet import TinyNet

logger = logging.getLogger(__name__)

CURVE_COLUMNS = ["epoch", "train_loss", "val_loss", "val_l1", "val_accuracy", "val_position_error"]


@dataclass
class ArraySplit:
    """Network-ready inputs (N, H, W, 3) and labels (N, 3) = (present, x, y)."""

    inputs: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        self.inputs = np.asarray(self.inputs, dtype=float)
        self.labels = np.asarray(self.labels, dtype=float)
        if len(self.inputs) != len(self.labels):
            raise ValueError(f"{len(self.inputs)} inputs but {len(self.labels)} labels")

    def __len__(self):
        return len(self.inputs)


def evaluate(net: TinyNet, split: ArraySplit, norm: str = "l1") -> dict:
    """Supervised loss, full-vector L1, presence accuracy and position error on a split."""
    out = net.predict(split.inputs)
    y = split.labels
    loss, _, _ = distill_loss_and_grad(out, None, y, 0.0, norm)
    l1 = float(np.mean(np.abs(out - y).sum(axis=1)))
    accuracy = float(np.mean((out[:, 0] >= 0.5) == (y[:, 0] >= 0.5)))
    present = y[:, 0] >= 0.5
    if present.any():
        position_error = float(np.mean(np.abs(out[present, 1:] - y[present, 1:])))
    else:
        position_error = 0.0
    return {
        "loss": loss,
        "l1": l1,
        "accuracy": accuracy,
        "position_error": position_error,
    }


def _diagnostics(net: TinyNet, out: np.ndarray, loss: float) -> dict:
    params = net.get_flat()
    grads = np.concatenate([g.ravel() for g in net.grads])
    return {
        "loss": loss,
        "max_abs_param": float(np.nanmax(np.abs(params))) if params.size else 0.0,
        "grad_norm": float(np.linalg.norm(grads)),
        "out_min": float(np.nanmin(out)),
        "out_max": float(np.nanmax(out)),
    }


def train(
    net: TinyNet,
    train_split: ArraySplit,
    val_split: ArraySplit,
    config: Optional[DistillConfig] = None,
    teacher: Optional[TinyNet] = None,
    progress: Optional[bool] = None,
) -> Tuple[TinyNet, pd.DataFrame]:
    """Minibatch SGD on the distillation loss (supervised when no teacher is given).

    The curves frame has one row per epoch; row 0 is the untrained network.
    """
    config = config or DistillConfig()
    if len(train_split) == 0 or len(val_split) == 0:
        raise ValueError("Training needs non-empty train and val splits")
    if progress is None:
        progress = get_config()["progress"]

    teacher_out = teacher.predict(train_split.inputs) if teacher is not None else None
    v = config.v if teacher is not None else 0.0
    rng = np.random.default_rng(config.seed)

    def curve_row(epoch: int, train_loss: float) -> dict:
        stats = evaluate(net, val_split, config.norm)
        return {
            "epoch": epoch,
            "train_loss": train_loss,
            "val_loss": stats["loss"],
            "val_l1": stats["l1"],
            "val_accuracy": stats["accuracy"],
            "val_position_error": stats["position_error"],
        }

    initial = net.predict(train_split.inputs)
    initial_loss, _, _ = distill_loss_and_grad(initial, teacher_out, train_split.labels, v, config.norm)
    rows = [curve_row(0, initial_loss)]

    epochs = tqdm(range(1, config.epochs + 1), desc="train", disable=not progress)
    for epoch in epochs:
        order = rng.permutation(len(train_split))
        batch_losses = []
        for b, start in enumerate(range(0, len(order), config.batch_size)):
            idx = order[start : start + config.batch_size]
            out = net.forward_batch(train_split.inputs[idx])
            t_out = teacher_out[idx] if teacher_out is not None else None
            loss, grad, _ = distill_loss_and_grad(out, t_out, train_split.labels[idx], v, config.norm)
            if not np.isfinite(loss):
                raise NonFiniteLoss(epoch, b, _diagnostics(net, out, loss))
            net.backward(grad)
            net.sgd_step(config.learning_rate)
            batch_losses.append(loss)

        row = curve_row(epoch, float(np.mean(batch_losses)))
        rows.append(row)
        logger.info(
            "epoch %d: train %.4f val %.4f acc %.3f pos %.4f",
            epoch,
            row["train_loss"],
            row["val_loss"],
            row["val_accuracy"],
            row["val_position_error"],
        )
        if not np.isfinite(row["val_loss"]):
            raise NonFiniteLoss(epoch, -1, {"val_loss": row["val_loss"]})

    return net, pd.DataFrame(rows, columns=CURVE_COLUMNS)
