"""Multi-trial experiment runner with CSV output.

Output layout under ``out_dir``::

    runs/<algorithm>_lam<lambda>_trial<k>.csv   one trace per run
    <algorithm>_lam<lambda>_mean.csv            trial means per checkpoint
    best_lambda.csv                             best lambda per algorithm

Every CSV has a header row and prints floats with 17 significant digits.
"""
import csv
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

import numpy as np

from .data import SplitSpec, balanced_subsample, load_dataset, read_keyvalue, two_gaussians
from .metrics import MarginStats, margin_stats, misclassification_error
from .trainer import ALGORITHMS, TRACE_COLUMNS, TrainConfig, train

log = logging.getLogger(__name__)

DEFAULT_LAMBDAS = tuple(10.0**-k for k in range(7))
BEST_COLUMNS = ("algorithm", "lambda", "best_test_err", "cost_at_best")


class ExperimentError(RuntimeError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int
    n_train: int = 200
    dataset: str = "synthetic"
    fmt: Optional[str] = None
    positive: Optional[str] = None
    minmax: bool = False
    synthetic_n: int = 1000
    synthetic_d: int = 5
    synthetic_separation: float = 5.0
    balance: float = 0.5
    algorithms: tuple = ALGORITHMS
    lambdas: tuple = DEFAULT_LAMBDAS
    gamma: float = 1.0
    s: float = 1.0
    k_bias: float = 1.0
    mode: str = "stochastic"
    step: float = 0.1
    epochs: float = 10.0
    T: Optional[int] = None
    trials: int = 25
    rescale_at: Optional[int] = None
    delta: float = 0.05
    out_dir: str = "results"
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        bad = set(self.algorithms) - set(ALGORITHMS)
        if bad:
            raise ValueError(f"unknown algorithms {sorted(bad)}")

    @property
    def iterations(self):
        return self.T if self.T is not None else max(1, int(round(self.epochs * self.n_train)))

    @classmethod
    def from_file(cls, path, **overrides):
        """Build from a ``key = value`` file; lists are comma separated."""
        raw = read_keyvalue(path)
        types = {f.name: f.type for f in fields(cls)}
        kwargs = {}
        for key, value in raw.items():
            if key not in types:
                raise ValueError(f"{path}: unknown key {key!r}")
            kwargs[key] = _coerce(key, value)
        kwargs.update({k: v for k, v in overrides.items() if v is not None})
        if "seed" not in kwargs:
            raise ValueError("seed is required")
        return cls(**kwargs)


_INT_KEYS = {"seed", "n_train", "synthetic_n", "synthetic_d", "trials", "workers"}
_OPT_INT_KEYS = {"T", "rescale_at"}
_FLOAT_KEYS = {"synthetic_separation", "balance", "gamma", "s", "k_bias", "epochs", "delta", "step"}


def _coerce(key, value):
    if key in _INT_KEYS:
        return int(value)
    if key in _OPT_INT_KEYS:
        return None if value.lower() in {"", "none"} else int(value)
    if key in _FLOAT_KEYS:
        return float(value)
    if key == "minmax":
        return value.lower() in {"1", "true", "yes"}
    if key == "algorithms":
        return tuple(v.strip() for v in value.split(",") if v.strip())
    if key == "lambdas":
        return tuple(float(v) for v in value.split(",") if v.strip())
    return value or None


def fmt_float(v):
    return format(float(v), ".17g")


def write_rows(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([v if isinstance(v, (str, int, np.integer)) else fmt_float(v) for v in row])


def write_trace(path, trace):
    write_rows(path, TRACE_COLUMNS, ([int(r.cost), *r[1:]] for r in trace.records))


def load_full_dataset(cfg):
    if cfg.dataset == "synthetic":
        return two_gaussians(cfg.synthetic_n, cfg.synthetic_d, cfg.synthetic_separation, cfg.seed)
    try:
        return load_dataset(cfg.dataset, cfg.fmt, cfg.positive, cfg.minmax)
    except (OSError, ValueError) as exc:
        raise ExperimentError(f"cannot load dataset {cfg.dataset!r}: {exc}") from exc


def trial_seeds(seed, trials):
    """Independent (split seed, training seed) pairs per trial."""
    children = np.random.SeedSequence(seed).spawn(trials)
    return [tuple(int(v) for v in c.generate_state(2)) for c in children]


def run_label(algorithm, lam):
    return f"{algorithm}_lam{lam:g}"


def _run_trial(args):
    cfg, full, k, split_seed, train_seed = args
    train_set, test_set = balanced_subsample(
        full, SplitSpec(cfg.n_train, cfg.balance, split_seed, size_cap_ratio=None)
    )
    out = {}
    for algorithm in cfg.algorithms:
        for lam in cfg.lambdas:
            tcfg = TrainConfig(
                s=cfg.s, gamma=cfg.gamma, k_bias=cfg.k_bias, lam=lam, T=cfg.iterations,
                step=cfg.step, seed=train_seed, mode=cfg.mode, algorithm=algorithm,
                rescale_at=cfg.rescale_at if algorithm == "margin_pursuit" else None,
                delta=cfg.delta,
            )
            out[(algorithm, lam)] = train(train_set, tcfg, test_set)[1]
    return k, out


def _aggregate(traces):
    table = np.array([[tuple(r) for r in t.records] for t in traces], dtype=np.float64)
    return table.mean(axis=0)


def run_experiment(cfg):
    """Run every (algorithm, lambda, trial) combination and write the CSVs.

    Returns a dict with the output directory, the per-run and aggregate file
    paths, and the best-lambda table as a list of row tuples.
    """
    full = load_full_dataset(cfg)
    out = Path(cfg.out_dir)
    (out / "runs").mkdir(parents=True, exist_ok=True)
    seeds = trial_seeds(cfg.seed, cfg.trials)
    jobs = [(cfg, full, k, s0, s1) for k, (s0, s1) in enumerate(seeds)]
    results = {}
    pool = ProcessPoolExecutor(cfg.workers) if cfg.workers > 1 else None
    try:
        it = pool.map(_run_trial, jobs) if pool else map(_run_trial, jobs)
        try:
            for k, res in it:
                results[k] = res
                log.info("trial %d done", k)
        except Exception as exc:
            failed = min(set(range(cfg.trials)) - set(results))
            raise ExperimentError(f"trial {failed} failed: {exc}") from exc
    finally:
        if pool:
            pool.shutdown()

    run_files, mean_files, best = [], [], []
    for algorithm in cfg.algorithms:
        best_row = None
        for lam in cfg.lambdas:
            label = run_label(algorithm, lam)
            traces = [results[k][(algorithm, lam)] for k in range(cfg.trials)]
            for k, trace in enumerate(traces):
                path = out / "runs" / f"{label}_trial{k:03d}.csv"
                write_trace(path, trace)
                run_files.append(path)
            mean = _aggregate(traces)
            path = out / f"{label}_mean.csv"
            write_rows(path, TRACE_COLUMNS, ([int(row[0]), *row[1:]] for row in mean))
            mean_files.append(path)
            test_col = mean[:, TRACE_COLUMNS.index("test_err")]
            i = int(np.argmin(test_col))
            row = (algorithm, fmt_float(lam), float(test_col[i]), int(mean[i, 0]))
            if best_row is None or row[2] < best_row[2]:
                best_row = row
        best.append(best_row)
    write_rows(out / "best_lambda.csv", BEST_COLUMNS, best)
    return {"out_dir": out, "runs": run_files, "means": mean_files, "best": best}


def select_best_lambda(mean_files):
    """Re-derive the best lambda per algorithm from aggregate CSVs alone."""
    best = {}
    for path in mean_files:
        stem = Path(path).stem
        algorithm, lam = stem[: -len("_mean")].rsplit("_lam", 1)
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        errs = [float(r["test_err"]) for r in rows]
        i = int(np.argmin(errs))
        if algorithm not in best or errs[i] < best[algorithm][1]:
            best[algorithm] = (float(lam), errs[i], int(rows[i]["cost"]))
    return best


__all__ = [
    "ExperimentConfig", "ExperimentError", "MarginStats", "margin_stats",
    "misclassification_error", "run_experiment", "select_best_lambda", "trial_seeds",
]
