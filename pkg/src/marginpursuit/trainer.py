"""Margin-pursuit training: full-batch descent, projected SGD, and the Pegasos baseline.

All runs record a :class:`TrainTrace` indexed by cost, the number of
single-example gradients computed so far. A full-batch step costs ``n``.
"""
import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Optional

import numpy as np

from . import _kernels
from .estimator import scale_from_quantile, scale_from_variance
from .loss import ScaledLoss, objective, objective_gradient
from .metrics import MarginStats, margins, misclassification_error, stats_of

MODES = ("batch", "stochastic")
ALGORITHMS = ("margin_pursuit", "pegasos")


@dataclass(frozen=True)
class TrainConfig:
    """Settings for a single training run.

    ``step`` is the fixed step size of batch mode. Stochastic runs always
    use ``1 / (s * sqrt(lam) * (1 + t))`` (margin pursuit) or
    ``1 / (lam * (1 + t))`` (Pegasos) and project onto the ball of radius
    ``1/sqrt(lam)``.
    """

    s: float = 1.0
    gamma: float = 1.0
    k_bias: float = 1.0
    step: float = 0.1
    lam: float = 0.0
    T: int = 100
    seed: int = 0
    mode: str = "stochastic"
    algorithm: str = "margin_pursuit"
    rescale_at: Optional[int] = None
    delta: float = 0.05
    quantile_level: float = 0.75
    auto_scale: bool = True
    var_inflation: float = 1.5
    checkpoint_every: Optional[int] = None
    w0: Optional[np.ndarray] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        ScaledLoss(self.s, self.gamma)
        if self.T < 1:
            raise ValueError("T must be at least 1")
        if self.lam < 0:
            raise ValueError("lam must be nonnegative")
        if self.step < 0:
            raise ValueError("step must be nonnegative")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}")

    @property
    def loss(self):
        return ScaledLoss(self.s, self.gamma)


class TraceRecord(NamedTuple):
    cost: int
    s: float
    objective: float
    train_err: float
    test_err: float
    mean: float
    var: float
    median: float
    q25: float
    q75: float
    min: float
    max: float
    catoni: float


TRACE_COLUMNS = TraceRecord._fields


@dataclass
class TrainTrace:
    records: list = field(default_factory=list)

    def column(self, name):
        return np.array([getattr(r, name) for r in self.records])

    def __len__(self):
        return len(self.records)

    def __getitem__(self, i):
        return self.records[i]


def init_weights(d, rng):
    """Uniform on ``[-1/sqrt(d), 1/sqrt(d)]`` per coordinate."""
    bound = 1.0 / math.sqrt(d)
    return rng.uniform(-bound, bound, size=d)


def project_ball(w, r):
    """Euclidean projection onto the centered ball of radius ``r``."""
    w = np.asarray(w, dtype=np.float64)
    nrm = np.linalg.norm(w)
    return w * (r / nrm) if nrm > r else w.copy()


def gd_step(w, data, cfg):
    """One full-batch margin-pursuit step with the fixed step ``cfg.step``."""
    grad = objective_gradient(w, data, cfg.loss)
    if cfg.lam > 0:
        grad = grad + cfg.lam * np.asarray(w)
    return np.asarray(w, dtype=np.float64) - cfg.step * grad


def _hinge_objective(w, data, lam):
    return float(np.mean(np.maximum(0.0, 1.0 - margins(w, data))) + 0.5 * lam * w @ w)


def _record(cost, w, data, test, cfg, s):
    if cfg.algorithm == "pegasos":
        obj = _hinge_objective(w, data, cfg.lam)
    else:
        obj = objective(w, data, ScaledLoss(s, cfg.gamma)) + 0.5 * cfg.lam * float(w @ w)
    st = stats_of(margins(w, data), s)
    test_err = misclassification_error(w, test) if test is not None else float("nan")
    return TraceRecord(cost, float(s), obj, misclassification_error(w, data), test_err, *st.as_tuple())


def _start(data, cfg):
    if data.n == 0:
        raise ValueError("cannot train on an empty dataset")
    rng = np.random.default_rng(cfg.seed)
    w = init_weights(data.d, rng)
    if cfg.w0 is not None:
        w = np.array(cfg.w0, dtype=np.float64)
        if w.shape != (data.d,):
            raise ValueError(f"w0 has shape {w.shape}, expected ({data.d},)")
    return rng, w


def initial_scale(w, data, cfg):
    """Scale for batch runs: at least ``cfg.s`` and at least the variance rule.

    The variance of the margins under ``w`` is inflated by ``cfg.var_inflation``
    to serve as an upper bound on the true margin variance.
    """
    if not cfg.auto_scale:
        return cfg.s
    v = cfg.var_inflation * float(np.var(margins(w, data)))
    return max(cfg.s, scale_from_variance(v, cfg.k_bias, cfg.gamma))


def train_batch(data, cfg, test=None):
    """Full-batch margin pursuit with fixed step size; one record per step."""
    rng, w = _start(data, cfg)
    s = initial_scale(w, data, cfg)
    step_cfg = replace(cfg, s=s)
    trace = TrainTrace([_record(0, w, data, test, cfg, s)])
    for t in range(cfg.T):
        w = gd_step(w, data, step_cfg)
        trace.records.append(_record((t + 1) * data.n, w, data, test, cfg, s))
    return w, trace


def _checkpoints(cfg, n):
    every = cfg.checkpoint_every or n
    stops = list(range(every, cfg.T, every)) + [cfg.T]
    if cfg.rescale_at is not None and 0 < cfg.rescale_at < cfg.T:
        stops.append(cfg.rescale_at)
    return sorted(set(stops)), set(range(every, cfg.T + 1, every)) | {cfg.T}


def _run_stochastic(data, cfg, test, step_fn):
    if cfg.lam <= 0:
        raise ValueError("stochastic training needs lam > 0")
    rng, w = _start(data, cfg)
    idx = rng.integers(0, data.n, size=cfg.T)
    radius = 1.0 / math.sqrt(cfg.lam)
    s = cfg.s
    trace = TrainTrace([_record(0, w, data, test, cfg, s)])
    stops, recorded = _checkpoints(cfg, data.n)
    t = 0
    for stop in stops:
        if cfg.rescale_at is not None and t == cfg.rescale_at:
            s = _rescale(w, data, cfg, s)
        w = step_fn(data.X, data.y, w, idx[t:stop], t, s, radius)
        t = stop
        if stop in recorded:
            trace.records.append(_record(stop, w, data, test, cfg, s))
    return w, trace


def _rescale(w, data, cfg, s):
    new = scale_from_quantile(margins(w, data), cfg.lam, cfg.delta, cfg.quantile_level)
    return new if new > 0 else s


def train_stochastic(data, cfg, test=None):
    """Projected single-sample margin pursuit with l2 regularization ``lam``.

    When ``cfg.rescale_at`` is set, the scale is replaced once, just before
    step ``rescale_at``, by the quantile rule on the current training margins;
    ``gamma`` stays fixed.
    """
    gamma, lam = cfg.gamma, cfg.lam

    def step(X, y, w, idx, t0, s, radius):
        return _kernels.sgd_margin_steps(X, y, w, idx, t0, s, gamma, lam, radius)

    return _run_stochastic(data, cfg, test, step)


def pegasos_train(data, cfg, test=None):
    """Pegasos with projection; same initialization, sampling and cadence as SGD."""
    lam = cfg.lam
    cfg = replace(cfg, rescale_at=None)

    def step(X, y, w, idx, t0, s, radius):
        return _kernels.pegasos_steps(X, y, w, idx, t0, lam, radius)

    return _run_stochastic(data, cfg, test, step)


def train(data, cfg, test=None):
    """Dispatch on ``cfg.algorithm`` and ``cfg.mode``."""
    if cfg.algorithm == "pegasos":
        return pegasos_train(data, cfg, test)
    if cfg.mode == "batch":
        return train_batch(data, cfg, test)
    return train_stochastic(data, cfg, test)


__all__ = [
    "MarginStats", "TRACE_COLUMNS", "TraceRecord", "TrainConfig", "TrainTrace",
    "gd_step", "init_weights", "initial_scale", "pegasos_train", "project_ball",
    "train", "train_batch", "train_stochastic",
]
