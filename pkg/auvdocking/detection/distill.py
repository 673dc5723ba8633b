"""Teacher-bounded distillation loss.

Per sample, the supervised error ``base = ||Y - f_s||`` is doubled up by ``v`` only
while the student is still worse than the teacher on that sample:

    loss_i = base_i + v * base_i * [base_i > ||Y - f_t||]

and the batch loss is the mean over samples.
"""

from typing import Optional, Tuple

import numpy as np


def _errors(pred: np.ndarray, truth: np.ndarray, norm: str) -> Tuple[np.ndarray, np.ndarray]:
    residual = pred - truth
    if norm == "l1":
        return np.abs(residual).sum(axis=1), residual
    if norm == "l2":
        return np.sqrt((residual**2).sum(axis=1)), residual
    raise ValueError(f"Unknown norm {norm!r}")


def _as_batch(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    return a[None, :] if a.ndim == 1 else a


def distill_loss_and_grad(
    student_out,
    teacher_out: Optional[np.ndarray],
    truth,
    v: float,
    norm: str = "l1",
) -> Tuple[float, np.ndarray, np.ndarray]:
    """Batch loss, its gradient w.r.t. the student outputs, and the per-sample gate."""
    fs = _as_batch(student_out)
    y = _as_batch(truth)
    if fs.shape != y.shape or fs.shape[1] != 3:
        raise ValueError(f"Expected matching (B, 3) arrays, got {fs.shape} and {y.shape}")
    batch = fs.shape[0]

    base, residual = _errors(fs, y, norm)
    if teacher_out is None or v == 0.0:
        gate = np.zeros(batch, dtype=bool)
    else:
        teacher_err, _ = _errors(_as_batch(teacher_out), y, norm)
        gate = base > teacher_err

    weight = 1.0 + v * gate
    loss = float(np.mean(weight * base))

    if norm == "l1":
        d_base = np.sign(residual)
    else:
        safe = np.where(base > 0.0, base, 1.0)
        d_base = residual / safe[:, None]
    grad = weight[:, None] * d_base / batch
    return loss, grad, gate


def distill_loss(student_out, teacher_out, truth, v: float, norm: str = "l1") -> float:
    return distill_loss_and_grad(student_out, teacher_out, truth, v, norm)[0]


def supervised_loss(student_out, truth, norm: str = "l1") -> float:
    return distill_loss(student_out, None, truth, 0.0, norm)
