"""Catoni-type location of the margin distribution and rules for picking the scale."""
import math
from dataclasses import dataclass

import numpy as np

from ._kernels import catoni_bisect

DEFAULT_TOL = 1e-10
MAX_ITER = 200


@dataclass(frozen=True)
class CatoniEstimate:
    value: float
    residual: float
    iterations: int


def _check_margins(q):
    q = np.ascontiguousarray(q, dtype=np.float64).ravel()
    if q.size == 0:
        raise ValueError("need at least one margin")
    if not np.all(np.isfinite(q)):
        raise ValueError("margins must be finite")
    return q


def catoni_estimate(q, s, tol=DEFAULT_TOL, max_iter=MAX_ITER):
    """Root in ``theta`` of ``mean(psi((theta - q) / s)) = 0`` by bisection.

    The mean is nondecreasing in ``theta`` and changes sign on
    ``[min(q), max(q)]``, so bisection there always brackets a root. When the
    root set is an interval (tiny ``s``) any point of it may be returned.
    Iteration stops once the residual is within ``tol`` or the bracket can no
    longer be split; the point with the smallest residual seen is returned.
    """
    if not s > 0:
        raise ValueError(f"scale must be positive, got {s!r}")
    q = _check_margins(q)
    value, resid, it = catoni_bisect(q, s, tol, max_iter)
    return CatoniEstimate(value, resid, it)


def stability_radius(n, s):
    """Largest shift of the estimate when one of ``n`` margins is replaced."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return s / math.sqrt(n)


def scale_from_variance(v, k, gamma):
    """Smallest scale ``v*k/gamma`` keeping the estimator bias below ``gamma/k``."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if k <= 0 or v < 0:
        raise ValueError("need v >= 0 and k > 0")
    return v * k / gamma


def lower_quantile(x, level):
    """Lower nearest-rank quantile: the ``ceil(level*n)``-th smallest value."""
    x = np.sort(np.asarray(x, dtype=np.float64).ravel())
    if x.size == 0:
        raise ValueError("quantile of an empty sample")
    rank = max(1, math.ceil(level * x.size))
    return float(x[rank - 1])


def scale_from_quantile(q, lam, delta, quantile_level=0.75):
    """One-shot data-driven scale ``sqrt(n*v / (2*lam*log(1/delta)))``.

    ``v`` is the lower nearest-rank ``quantile_level`` quantile of ``|q|``.
    """
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    if lam <= 0:
        raise ValueError("lam must be positive")
    if not 0 < quantile_level < 1:
        raise ValueError("quantile_level must lie in (0, 1)")
    q = _check_margins(q)
    v = lower_quantile(np.abs(q), quantile_level)
    return math.sqrt(q.size * v / (2.0 * lam * math.log(1.0 / delta)))


def lemma3_scale(v, n, delta):
    """Scale ``sqrt(n*v / (2*log(2/delta)))`` minimizing the pointwise error bound."""
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    if v <= 0 or n < 1:
        raise ValueError("need v > 0 and n >= 1")
    return math.sqrt(n * v / (2.0 * math.log(2.0 / delta)))


def pointwise_bound(v, n, delta):
    """Half-width ``sqrt(2*v*log(2/delta)/n)`` of the pointwise confidence interval."""
    return math.sqrt(2.0 * v * math.log(2.0 / delta) / n)
