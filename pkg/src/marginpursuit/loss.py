"""Soft-truncation influence function, its antiderivative, and the margin objective.

All functions accept scalars or arrays and broadcast like numpy ufuncs.
Scalar inputs give numpy float64 scalars back.
"""
from dataclasses import dataclass

import numpy as np

SQRT2 = np.sqrt(2.0)
#: Saturation level of ``psi``; also the Lipschitz constant of ``rho``.
PSI_MAX = 2.0 * SQRT2 / 3.0


@dataclass(frozen=True)
class ScaledLoss:
    """Scale ``s`` and margin level ``gamma`` of the surrogate loss."""

    s: float = 1.0
    gamma: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.s) and self.s > 0):
            raise ValueError(f"scale s must be positive and finite, got {self.s!r}")
        if not np.isfinite(self.gamma):
            raise ValueError(f"gamma must be finite, got {self.gamma!r}")


def psi(u):
    """Influence function: ``u - u**3/6`` on ``[-sqrt2, sqrt2]``, ``+-2*sqrt2/3`` outside."""
    u = np.asarray(u, dtype=np.float64)
    inner = np.abs(u) <= SQRT2
    # written through u*u so that psi(-u) == -psi(u) bit for bit
    return np.where(inner, u * (1.0 - u * u / 6.0), np.sign(u) * PSI_MAX)[()]


def rho(u):
    """Loss with ``rho' = psi``; quartic near zero, linear beyond ``sqrt2``."""
    u = np.asarray(u, dtype=np.float64)
    a = np.abs(u)
    u2 = u * u
    return np.where(a <= SQRT2, u2 / 2.0 - u2 * u2 / 24.0, a * PSI_MAX - 0.5)[()]


def rho_second(u):
    u = np.asarray(u, dtype=np.float64)
    # clamp: at u = sqrt2 the rounded square exceeds 2 by an ulp
    return np.maximum(np.where(np.abs(u) <= SQRT2, 1.0 - u**2 / 2.0, 0.0), 0.0)[()]


def surrogate_phi(u, loss):
    """Margin surrogate ``s**2 * rho((gamma - u)/s)``, convex in the margin ``u``."""
    s = loss.s
    return s * s * rho((loss.gamma - np.asarray(u, dtype=np.float64)) / s)


def _margins(w, data):
    X = np.asarray(data.X, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 1 or X.ndim != 2 or X.shape[1] != w.shape[0]:
        raise ValueError(
            f"dimension mismatch: weights {w.shape} vs features {X.shape}"
        )
    if X.shape[0] == 0:
        raise ValueError("empty dataset")
    return data.y * (X @ w)


def objective(w, data, loss):
    """Mean surrogate loss over the sample (no regularization)."""
    return float(np.mean(surrogate_phi(_margins(w, data), loss)))


def objective_gradient(w, data, loss):
    """Exact gradient of :func:`objective` with respect to ``w``.

    Equals ``-(s/n) * sum_i psi((gamma - m_i)/s) * y_i * x_i`` where ``m_i`` is
    the margin of point ``i``; a step ``w - alpha * grad`` is one full-batch
    margin-pursuit update.
    """
    m = _margins(w, data)
    weights = psi((loss.gamma - m) / loss.s) * data.y
    return -(loss.s / m.shape[0]) * (np.asarray(data.X, dtype=np.float64).T @ weights)
