"""Datasets: LIBSVM / CSV ingestion, balanced train-test splits, toy fixtures."""
import io
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


@dataclass(frozen=True, eq=False)
class Dataset:
    """Dense ``n x d`` feature matrix with labels in {-1, +1}."""

    X: np.ndarray
    y: np.ndarray
    raw_labels: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        X = np.ascontiguousarray(self.X, dtype=np.float64)
        y = np.ascontiguousarray(self.y, dtype=np.float64)
        if X.ndim != 2:
            raise ValueError(f"features must be 2-D, got shape {X.shape}")
        if y.shape != (X.shape[0],):
            raise ValueError(f"labels shape {y.shape} does not match {X.shape[0]} rows")
        if not np.all((y == 1.0) | (y == -1.0)):
            raise ValueError("labels must be -1 or +1")
        if not np.all(np.isfinite(X)):
            raise ValueError("features must be finite")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def d(self):
        return self.X.shape[1]

    def subset(self, idx):
        idx = np.asarray(idx, dtype=np.int64)
        raw = None if self.raw_labels is None else self.raw_labels[idx]
        return Dataset(self.X[idx], self.y[idx], raw)

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.X.shape == other.X.shape
            and np.array_equal(self.X, other.X)
            and np.array_equal(self.y, other.y)
        )

    __hash__ = None


def positive_rule(spec):
    """Build a positive-class predicate from a short rule string.

    ``">0"`` (default) marks labels above zero as positive; any number, e.g.
    ``"5"``, marks exactly that label value as positive.
    """
    if spec is None or str(spec).strip() in {"", ">0"}:
        return lambda lab: lab > 0
    value = float(spec)
    return lambda lab: lab == value


def _as_text(source):
    if isinstance(source, (bytes, bytearray)):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    data = source.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


def parse_libsvm(source, positive=None, n_features=None):
    """Parse LIBSVM/SVMlight text (``<label> <idx>:<val> ...``, 1-based indices).

    ``source`` may be ``str``, ``bytes`` or a file-like object. Labels are
    binarized with the ``positive`` predicate (default: label > 0).
    """
    is_pos = positive if callable(positive) else positive_rule(positive)
    labels, rows, cols, vals = [], [], [], []
    d = 0
    for lineno, line in enumerate(_as_text(source).splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            label = float(parts[0])
        except ValueError:
            raise ValueError(f"line {lineno}: bad label {parts[0]!r}") from None
        row = len(labels)
        prev = 0
        for tok in parts[1:]:
            idx_s, sep, val_s = tok.partition(":")
            if not sep:
                raise ValueError(f"line {lineno}: expected idx:value, got {tok!r}")
            try:
                idx, val = int(idx_s), float(val_s)
            except ValueError:
                raise ValueError(f"line {lineno}: non-numeric entry {tok!r}") from None
            if idx <= prev:
                raise ValueError(f"line {lineno}: indices must be ascending and >= 1")
            prev = idx
            rows.append(row)
            cols.append(idx - 1)
            vals.append(val)
        d = max(d, prev)
        labels.append(label)
    if n_features is not None:
        if n_features < d:
            raise ValueError(f"n_features={n_features} but index {d} seen")
        d = n_features
    X = np.zeros((len(labels), d))
    X[rows, cols] = vals
    raw = np.asarray(labels, dtype=np.float64)
    y = np.where([is_pos(lab) for lab in raw], 1.0, -1.0) if labels else np.zeros(0)
    return Dataset(X, y, raw)


def _fmt(v):
    return repr(float(v))


def serialize_libsvm(data):
    """Inverse of :func:`parse_libsvm` (labels written as +1/-1, zeros omitted)."""
    out = io.StringIO()
    for xi, yi in zip(data.X, data.y):
        nz = np.flatnonzero(xi)
        feats = " ".join(f"{j + 1}:{_fmt(xi[j])}" for j in nz)
        out.write(f"{int(yi):+d} {feats}".rstrip() + "\n")
    return out.getvalue()


def parse_csv(source, positive=None, header=None):
    """Parse dense rows ``label,f1,...,fd``. A non-numeric first row is a header."""
    is_pos = positive if callable(positive) else positive_rule(positive)
    lines = [ln.strip() for ln in _as_text(source).splitlines() if ln.strip()]
    if lines and header is None:
        try:
            [float(t) for t in lines[0].split(",")]
            header = False
        except ValueError:
            header = True
    if header:
        lines = lines[1:]
    if not lines:
        return Dataset(np.zeros((0, 0)), np.zeros(0))
    table = []
    for lineno, ln in enumerate(lines, start=2 if header else 1):
        try:
            table.append([float(t) for t in ln.split(",")])
        except ValueError:
            raise ValueError(f"line {lineno}: non-numeric value") from None
        if len(table[-1]) != len(table[0]):
            raise ValueError(f"line {lineno}: expected {len(table[0])} columns")
    arr = np.asarray(table)
    raw = arr[:, 0]
    y = np.where([is_pos(lab) for lab in raw], 1.0, -1.0)
    return Dataset(arr[:, 1:], y, raw)


def minmax_scale(data):
    """Per-feature rescaling to [0, 1]; constant columns map to 0."""
    lo, hi = data.X.min(axis=0), data.X.max(axis=0)
    span = np.where(hi > lo, hi - lo, 1.0)
    return Dataset((data.X - lo) / span, data.y, data.raw_labels)


@dataclass(frozen=True)
class SplitSpec:
    n_train: int
    balance: float = 0.5
    seed: int = 0
    size_cap_ratio: float = 10.0

    def __post_init__(self):
        if not 0.0 < self.balance < 1.0:
            raise ValueError("balance must lie strictly between 0 and 1")
        if self.n_train < 1:
            raise ValueError("n_train must be positive")


def _largest_balanced(n_pos, n_neg, balance):
    """Largest class counts in the ratio ``balance : 1 - balance`` (exact at 0.5)."""
    ratio = balance / (1.0 - balance)
    t_neg = min(n_neg, int(np.floor(n_pos / ratio + 1e-9)))
    t_pos = min(n_pos, int(np.floor(t_neg * ratio + 0.5)))
    return t_pos, t_neg


def balanced_subsample(full, spec, rng=None):
    """Random balanced training subset plus the largest balanced test set from the rest.

    Sampling is without replacement. The split is a pure function of
    ``spec.seed`` unless an explicit ``rng`` is passed.
    """
    if full.n == 0:
        raise ValueError("cannot split an empty dataset")
    if spec.size_cap_ratio is not None and spec.n_train > spec.size_cap_ratio * full.d:
        warnings.warn(
            f"n_train={spec.n_train} exceeds {spec.size_cap_ratio:g} x d={full.d}",
            stacklevel=2,
        )
    rng = np.random.default_rng(spec.seed) if rng is None else rng
    pos = np.flatnonzero(full.y > 0)
    neg = np.flatnonzero(full.y < 0)
    k_pos = int(np.floor(spec.balance * spec.n_train + 0.5))
    k_neg = spec.n_train - k_pos
    if len(pos) < k_pos:
        raise ValueError(f"positive class has {len(pos)} points, {k_pos} needed")
    if len(neg) < k_neg:
        raise ValueError(f"negative class has {len(neg)} points, {k_neg} needed")
    pos = rng.permutation(pos)
    neg = rng.permutation(neg)
    t_pos, t_neg = _largest_balanced(len(pos) - k_pos, len(neg) - k_neg, spec.balance)
    train_idx = np.concatenate([pos[:k_pos], neg[:k_neg]])
    test_idx = np.concatenate([pos[k_pos:k_pos + t_pos], neg[k_neg:k_neg + t_neg]])
    return full.subset(rng.permutation(train_idx)), full.subset(rng.permutation(test_idx))


def two_gaussians(n, d, separation=5.0, seed=0):
    """Balanced two-class Gaussian blobs with unit covariance.

    Class means sit at ``+-separation/2`` along a random unit direction, so
    the Bayes error is ``Phi(-separation/2)``.
    """
    rng = np.random.default_rng(seed)
    direction = rng.normal(size=d)
    direction /= np.linalg.norm(direction)
    y = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    X = rng.normal(size=(n, d)) + np.outer(y, direction) * (separation / 2.0)
    return Dataset(X, y)


def read_keyvalue(path):
    """Read a plain ``key = value`` file; ``#`` starts a comment."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        out[key.strip()] = value.strip()
    return out


def load_dataset(path, fmt=None, positive=None, scale=False):
    """Load a LIBSVM or CSV file; format is inferred from the suffix if not given."""
    path = Path(path)
    if fmt is None:
        fmt = "csv" if path.suffix.lower() == ".csv" else "libsvm"
    with open(path, "rb") as fh:
        if fmt == "csv":
            data = parse_csv(fh, positive=positive)
        elif fmt == "libsvm":
            data = parse_libsvm(fh, positive=positive)
        else:
            raise ValueError(f"unknown dataset format {fmt!r}")
    return minmax_scale(data) if scale else data
