"""Central finite-difference gradients and Adam updates."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .errors import InvalidInputError


def finite_diff_gradient(f: Callable[[np.ndarray], float], theta, h: float = 1e-4,
                         workers: int | None = None) -> np.ndarray:
    """Gradient of ``f`` at ``theta`` by central differences.

    With ``workers > 1`` the ``2 * len(theta)`` evaluations run on a thread
    pool; ``f`` must be pure.  The reduction is the same either way, so the
    result is bit-identical to the sequential one.
    """
    if not h > 0:
        raise InvalidInputError(f"step must be positive, got {h}")
    theta = np.asarray(theta, dtype=float)
    p = theta.size
    points = [theta + h * e for e in np.eye(p)] + [theta - h * e for e in np.eye(p)]
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            vals = list(pool.map(f, points))
    else:
        vals = [f(x) for x in points]
    vals = np.asarray(vals, dtype=float)
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("objective returned a non-finite value")
    return (vals[:p] - vals[p:]) / (2.0 * h)


@dataclass(frozen=True)
class AdamState:
    m: np.ndarray
    v: np.ndarray
    t: int = 0
    lr: float = 0.01
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def fresh(cls, size: int, **hyper) -> "AdamState":
        return cls(np.zeros(size), np.zeros(size), 0, **hyper)

    def resized(self, size: int) -> "AdamState":
        """Fresh moments of a new length, same hyperparameters."""
        return replace(self, m=np.zeros(size), v=np.zeros(size), t=0)


def adam_step(state: AdamState, theta, grad) -> tuple[AdamState, np.ndarray]:
    theta = np.asarray(theta, dtype=float)
    grad = np.asarray(grad, dtype=float)
    if not (theta.shape == grad.shape == state.m.shape):
        raise InvalidInputError(
            f"shape mismatch: theta {theta.shape}, grad {grad.shape}, state {state.m.shape}")
    t = state.t + 1
    m = state.beta1 * state.m + (1 - state.beta1) * grad
    v = state.beta2 * state.v + (1 - state.beta2) * grad**2
    m_hat = m / (1 - state.beta1**t)
    v_hat = v / (1 - state.beta2**t)
    new_theta = theta - state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
    return replace(state, m=m, v=v, t=t), new_theta
