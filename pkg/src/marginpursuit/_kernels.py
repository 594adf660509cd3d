"""Hot loops, each with a numba version and a pure-numpy version.

The public names at the bottom dispatch on ``_accel.USE_NUMBA``. Both
versions perform the same arithmetic in the same order per step, but may
differ in the last bits (numba can fuse or reorder the inner dot product).
"""
import math

import numpy as np

from ._accel import USE_NUMBA, njit
from .loss import PSI_MAX, SQRT2, psi


@njit
def _psi_scalar(u):
    if u > SQRT2:
        return PSI_MAX
    if u < -SQRT2:
        return -PSI_MAX
    return u * (1.0 - u * u / 6.0)


@njit
def _mean_psi_nb(theta, q, s):
    acc = 0.0
    for i in range(q.shape[0]):
        acc += _psi_scalar((theta - q[i]) / s)
    return acc / q.shape[0]


@njit
def _catoni_bisect_nb(q, s, tol, max_iter):
    lo = q.min()
    hi = q.max()
    f_lo = _mean_psi_nb(lo, q, s)
    if abs(f_lo) <= tol:
        return lo, f_lo, 0
    f_hi = _mean_psi_nb(hi, q, s)
    if abs(f_hi) <= tol:
        return hi, f_hi, 0
    best, f_best = (lo, f_lo) if abs(f_lo) < abs(f_hi) else (hi, f_hi)
    it = 0
    while it < max_iter:
        it += 1
        mid = 0.5 * (lo + hi)
        f_mid = _mean_psi_nb(mid, q, s)
        if abs(f_mid) < abs(f_best):
            best, f_best = mid, f_mid
        if abs(f_mid) <= tol or mid == lo or mid == hi:
            break
        if f_mid > 0.0:
            hi = mid
        else:
            lo = mid
    return best, f_best, it


def _catoni_bisect_np(q, s, tol, max_iter):
    def f(theta):
        return float(np.mean(psi((theta - q) / s)))

    lo, hi = float(q.min()), float(q.max())
    f_lo = f(lo)
    if abs(f_lo) <= tol:
        return lo, f_lo, 0
    f_hi = f(hi)
    if abs(f_hi) <= tol:
        return hi, f_hi, 0
    best, f_best = (lo, f_lo) if abs(f_lo) < abs(f_hi) else (hi, f_hi)
    it = 0
    while it < max_iter:
        it += 1
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if abs(f_mid) < abs(f_best):
            best, f_best = mid, f_mid
        if abs(f_mid) <= tol or mid == lo or mid == hi:
            break
        if f_mid > 0.0:
            hi = mid
        else:
            lo = mid
    return best, f_best, it


@njit
def _project_nb(w, radius):
    nrm = math.sqrt(np.dot(w, w))
    if nrm > radius:
        w *= radius / nrm


@njit
def _sgd_margin_nb(X, y, w, idx, t0, s, gamma, lam, radius):
    d = X.shape[1]
    root_lam = math.sqrt(lam)
    for j in range(idx.shape[0]):
        i = idx[j]
        m = 0.0
        for k in range(d):
            m += X[i, k] * w[k]
        m *= y[i]
        coef = -s * _psi_scalar((gamma - m) / s) * y[i]
        alpha = 1.0 / (s * root_lam * (1.0 + t0 + j))
        for k in range(d):
            w[k] -= alpha * (lam * w[k] + coef * X[i, k])
        _project_nb(w, radius)
    return w


@njit
def _pegasos_nb(X, y, w, idx, t0, lam, radius):
    d = X.shape[1]
    for j in range(idx.shape[0]):
        i = idx[j]
        m = 0.0
        for k in range(d):
            m += X[i, k] * w[k]
        m *= y[i]
        eta = 1.0 / (lam * (1.0 + t0 + j))
        shrink = 1.0 - eta * lam
        if m < 1.0:
            for k in range(d):
                w[k] = shrink * w[k] + eta * y[i] * X[i, k]
        else:
            for k in range(d):
                w[k] = shrink * w[k]
        _project_nb(w, radius)
    return w


def _project_np(w, radius):
    nrm = np.linalg.norm(w)
    if nrm > radius:
        w *= radius / nrm


def _sgd_margin_np(X, y, w, idx, t0, s, gamma, lam, radius):
    root_lam = math.sqrt(lam)
    for j, i in enumerate(idx):
        xi = X[i]
        m = y[i] * float(xi @ w)
        coef = -s * float(psi((gamma - m) / s)) * y[i]
        alpha = 1.0 / (s * root_lam * (1.0 + t0 + j))
        w -= alpha * (lam * w + coef * xi)
        _project_np(w, radius)
    return w


def _pegasos_np(X, y, w, idx, t0, lam, radius):
    for j, i in enumerate(idx):
        xi = X[i]
        m = y[i] * float(xi @ w)
        eta = 1.0 / (lam * (1.0 + t0 + j))
        w *= 1.0 - eta * lam
        if m < 1.0:
            w += eta * y[i] * xi
        _project_np(w, radius)
    return w


def catoni_bisect(q, s, tol, max_iter, use_numba=None):
    use_numba = USE_NUMBA if use_numba is None else use_numba
    fn = _catoni_bisect_nb if use_numba else _catoni_bisect_np
    theta, resid, it = fn(q, float(s), float(tol), int(max_iter))
    return float(theta), float(resid), int(it)


def sgd_margin_steps(X, y, w, idx, t0, s, gamma, lam, radius, use_numba=None):
    """Run ``len(idx)`` projected margin-pursuit steps from ``w``; returns a new array."""
    use_numba = USE_NUMBA if use_numba is None else use_numba
    fn = _sgd_margin_nb if use_numba else _sgd_margin_np
    return fn(X, y, np.array(w, dtype=np.float64), idx, int(t0), float(s), float(gamma), float(lam), float(radius))


def pegasos_steps(X, y, w, idx, t0, lam, radius, use_numba=None):
    """Run ``len(idx)`` Pegasos steps from ``w``; returns a new array."""
    use_numba = USE_NUMBA if use_numba is None else use_numba
    fn = _pegasos_nb if use_numba else _pegasos_np
    return fn(X, y, np.array(w, dtype=np.float64), idx, int(t0), float(lam), float(radius))
