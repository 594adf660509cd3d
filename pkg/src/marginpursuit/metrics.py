"""Margin-distribution statistics and misclassification error."""
from dataclasses import astuple, dataclass, fields

import numpy as np

from .estimator import catoni_estimate, lower_quantile


@dataclass(frozen=True)
class MarginStats:
    mean: float
    var: float
    median: float
    q25: float
    q75: float
    min: float
    max: float
    catoni: float

    @classmethod
    def names(cls):
        return tuple(f.name for f in fields(cls))

    def as_tuple(self):
        return astuple(self)


def margins(w, data):
    if data.n == 0:
        raise ValueError("empty dataset")
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (data.d,):
        raise ValueError(f"weights of shape {w.shape} for {data.d} features")
    return data.y * (data.X @ w)


def stats_of(q, s):
    """Population variance; quantiles by lower nearest rank (median = q50)."""
    q = np.asarray(q, dtype=np.float64)
    return MarginStats(
        mean=float(q.mean()),
        var=float(q.var()),
        median=lower_quantile(q, 0.5),
        q25=lower_quantile(q, 0.25),
        q75=lower_quantile(q, 0.75),
        min=float(q.min()),
        max=float(q.max()),
        catoni=catoni_estimate(q, s).value,
    )


def margin_stats(w, data, loss):
    return stats_of(margins(w, data), loss.s)


def misclassification_error(w, data):
    """Fraction of points with margin ``<= 0`` (a zero score counts as an error)."""
    return float(np.mean(margins(w, data) <= 0.0))
