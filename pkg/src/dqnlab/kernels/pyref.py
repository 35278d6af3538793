"""Numpy reference implementations of the dense-network kernels.

This module is the readable source of truth for kernel semantics; the
compiled backend in ``_ckernels.pyx`` mirrors it function for function.
All kernels operate on C-contiguous float64 arrays. Weight matrices are
row-major ``(fan_out, fan_in)``: row j holds the input weights of output
unit j.
"""

from __future__ import annotations

import numpy as np


def affine_forward(x: np.ndarray, w: np.ndarray, b: np.ndarray) -> np.ndarray:
    """y[i, j] = sum_k x[i, k] * w[j, k] + b[j]."""
    return x @ w.T + b


def affine_backward(x: np.ndarray, w: np.ndarray, dy: np.ndarray):
    """Gradients of an affine layer: returns (dx, dw, db)."""
    dx = dy @ w
    dw = dy.T @ x
    db = dy.sum(axis=0)
    return dx, dw, db


def relu_forward(z: np.ndarray) -> np.ndarray:
    return np.maximum(z, 0.0)


def relu_backward(z: np.ndarray, da: np.ndarray) -> np.ndarray:
    """Pass da through where the pre-activation was positive, else zero."""
    return np.where(z > 0.0, da, 0.0)


def apply_mask(a: np.ndarray, mask: np.ndarray, scale: float) -> np.ndarray:
    """Elementwise a * mask * scale (dropout forward and backward)."""
    return a * mask * scale


def huber_elementwise(pred: np.ndarray, target: np.ndarray, delta: float):
    """Per-element Huber loss and its derivative w.r.t. pred.

    Quadratic 0.5*d^2 for |d| <= delta, linear delta*|d| - 0.5*delta^2
    beyond; the derivative is d clamped to [-delta, +delta].
    """
    diff = pred - target
    adiff = np.abs(diff)
    quad = adiff <= delta
    loss = np.where(quad, 0.5 * diff * diff, delta * adiff - 0.5 * delta * delta)
    grad = np.clip(diff, -delta, delta)
    return loss, grad


def clip_elementwise(g: np.ndarray, limit: float) -> np.ndarray:
    return np.clip(g, -limit, limit)


def adam_update(
    p: np.ndarray,
    g: np.ndarray,
    m: np.ndarray,
    v: np.ndarray,
    t: int,
    lr: float,
    beta1: float,
    beta2: float,
    eps: float,
) -> None:
    """One bias-corrected adaptive-moment step, in place on p, m, v.

    t is the 1-based step count after this update.
    """
    m[:] = beta1 * m + (1.0 - beta1) * g
    v[:] = beta2 * v + (1.0 - beta2) * g * g
    mhat = m / (1.0 - beta1**t)
    vhat = v / (1.0 - beta2**t)
    p -= lr * mhat / (np.sqrt(vhat) + eps)


def polyak_update(target: np.ndarray, policy: np.ndarray, tau: float) -> None:
    """target <- tau*policy + (1-tau)*target, in place.

    Written as target += tau*(policy - target) so equal inputs are an
    exact no-op; tau == 1 copies exactly.
    """
    if tau == 1.0:
        target[:] = policy
    else:
        target += tau * (policy - target)
