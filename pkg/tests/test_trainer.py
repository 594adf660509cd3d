import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from marginpursuit import _kernels
from marginpursuit.data import Dataset
from marginpursuit.loss import ScaledLoss, objective, objective_gradient
from marginpursuit.trainer import (
    TRACE_COLUMNS, TrainConfig, gd_step, init_weights, pegasos_train, project_ball, train,
    train_batch, train_stochastic,
)

from conftest import random_dataset

E1 = Dataset(np.array([[1.0, 0.0]]), np.array([1.0]))
TOY = Dataset(np.array([[1.0, 0.5], [0.5, 1.0], [-1.0, -0.5], [-0.5, -1.0]]),
              np.array([1.0, 1.0, -1.0, -1.0]))


def test_gd_step_fixed_point():
    cfg = TrainConfig(step=1.0)
    w = np.array([1.0, 7.0])
    assert np.array_equal(gd_step(w, E1, cfg), w)


def test_gd_step_hand_value():
    cfg = TrainConfig(s=1.0, gamma=1.0, step=1.0)
    assert np.allclose(gd_step(np.zeros(2), E1, cfg), [5 / 6, 0.0], atol=1e-15)


def test_gd_step_equals_gradient_update(rng):
    for _ in range(20):
        data = random_dataset(rng, 10, 4)
        cfg = TrainConfig(s=rng.uniform(0.5, 2), gamma=1.0, step=rng.uniform(0, 1))
        w = rng.normal(size=4)
        expected = w - cfg.step * objective_gradient(w, data, cfg.loss)
        assert np.allclose(gd_step(w, data, cfg), expected, rtol=0, atol=1e-12)


def test_gd_step_dimension_mismatch():
    with pytest.raises(ValueError):
        gd_step(np.zeros(3), E1, TrainConfig())


def test_batch_zero_step_returns_start():
    cfg = TrainConfig(mode="batch", step=0.0, T=1, seed=5)
    w, trace = train_batch(TOY, cfg)
    w0 = init_weights(2, np.random.default_rng(5))
    assert np.array_equal(w, w0)
    assert np.array_equal(trace[0][2:], trace[1][2:], equal_nan=True)


def test_batch_separable_toy():
    cfg = TrainConfig(mode="batch", s=1.0, gamma=1.0, step=0.5, T=500, auto_scale=False)
    w, trace = train_batch(TOY, cfg)
    assert trace[-1].train_err == 0.0
    obj = trace.column("objective")
    assert np.all(np.diff(obj) <= 1e-12)


def test_batch_symmetric_data_stays_at_zero():
    data = Dataset(np.array([[1.0, 2.0], [-1.0, -2.0]]), np.array([1.0, 1.0]))
    cfg = TrainConfig(mode="batch", step=0.3, T=10, w0=np.zeros(2))
    w, _ = train_batch(data, cfg)
    assert np.array_equal(w, np.zeros(2))


def test_batch_descent_property(rng):
    for _ in range(10):
        data = random_dataset(rng, 30, 5)
        vx = float(np.mean(np.sum(data.X**2, axis=1)))
        cfg = TrainConfig(mode="batch", s=rng.uniform(0.3, 3), step=1.0 / vx, T=50,
                          auto_scale=False, seed=int(rng.integers(1000)))
        _, trace = train_batch(data, cfg)
        assert np.all(np.diff(trace.column("objective")) <= 1e-12)


def test_batch_scale_rule():
    cfg = TrainConfig(mode="batch", s=1e-3, gamma=2.0, k_bias=4.0, T=1, step=0.0, seed=1)
    w0 = init_weights(2, np.random.default_rng(1))
    v = 1.5 * np.var(TOY.y * (TOY.X @ w0))
    _, trace = train_batch(TOY, cfg)
    assert trace[0].s == pytest.approx(max(1e-3, v * 4.0 / 2.0))


def test_batch_costs():
    _, trace = train_batch(TOY, TrainConfig(mode="batch", T=3))
    assert list(trace.column("cost")) == [0, 4, 8, 12]


@pytest.mark.parametrize("w, r, expected", [
    ((0.3, 0.4), 1.0, (0.3, 0.4)),
    ((3.0, 4.0), 1.0, (0.6, 0.8)),
    ((0.0, 0.0), 1.0, (0.0, 0.0)),
])
def test_project_ball(w, r, expected):
    assert np.allclose(project_ball(np.array(w), r), expected, atol=1e-15)


@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=6), st.floats(1e-3, 1e3))
def test_projection_idempotent(w, r):
    p = project_ball(np.array(w), r)
    assert np.linalg.norm(p) <= r * (1 + 1e-12)
    assert np.allclose(project_ball(p, r), p, rtol=1e-15, atol=0)


def test_stochastic_projection_after_first_step():
    w0 = np.array([3.0, 4.0])
    cfg = TrainConfig(lam=1.0, T=1, w0=w0)
    w, _ = train_stochastic(E1, cfg)
    assert np.linalg.norm(w) <= 1.0 + 1e-12


def test_stochastic_first_step_by_hand():
    w0 = np.array([0.2, -0.1])
    lam, s, g = 0.04, 2.0, 1.0
    cfg = TrainConfig(s=s, gamma=g, lam=lam, T=1, w0=w0)
    w, _ = train_stochastic(E1, cfg)
    grad = objective_gradient(w0, E1, ScaledLoss(s, g))
    expected = project_ball(w0 - (lam * w0 + grad) / (s * math.sqrt(lam)), 1 / math.sqrt(lam))
    assert np.allclose(w, expected, atol=1e-15)


def test_stochastic_requires_positive_lambda():
    with pytest.raises(ValueError):
        train_stochastic(TOY, TrainConfig(lam=0.0))
    with pytest.raises(ValueError):
        pegasos_train(TOY, TrainConfig(lam=0.0, algorithm="pegasos"))


def test_config_validation():
    for bad in [dict(T=0), dict(lam=-1.0), dict(step=-0.1), dict(mode="x"),
                dict(algorithm="x"), dict(s=0.0)]:
        with pytest.raises(ValueError):
            TrainConfig(**bad)


@pytest.mark.parametrize("algorithm", ["margin_pursuit", "pegasos"])
def test_seeded_determinism(gaussian_split, algorithm):
    tr, te = gaussian_split
    cfg = TrainConfig(lam=1e-3, T=600, seed=11, algorithm=algorithm)
    w1, t1 = train(tr, cfg, te)
    w2, t2 = train(tr, cfg, te)
    assert np.array_equal(w1, w2)
    assert np.array_equal(np.array(t1.records), np.array(t2.records), equal_nan=True)


def test_trace_cadence_and_columns(gaussian_split):
    tr, te = gaussian_split
    _, trace = train(tr, TrainConfig(lam=1e-2, T=450), te)
    cost = trace.column("cost")
    assert list(cost) == [0, 200, 400, 450]
    assert TRACE_COLUMNS[0] == "cost" and len(trace[0]) == len(TRACE_COLUMNS)


def test_pegasos_hand_case():
    cfg = TrainConfig(lam=1.0, T=1, w0=np.zeros(2), algorithm="pegasos")
    w, _ = pegasos_train(E1, cfg)
    assert np.allclose(w, [1.0, 0.0], atol=1e-15)


def test_pegasos_shrink_when_hinge_inactive():
    w0 = np.array([2.0, 0.5])
    cfg = TrainConfig(lam=0.1, T=1, w0=w0, algorithm="pegasos")
    w, _ = pegasos_train(E1, cfg)
    # t = 0: eta = 1/lam, so (1 - eta*lam) = 0
    assert np.allclose(w, 0.0)
    X, y = E1.X, E1.y
    w = _kernels.pegasos_steps(X, y, w0.copy(), np.array([0]), 3, 0.1, 10.0)
    assert np.allclose(w, (1 - 1 / 4) * w0)


def test_rescale_changes_scale(gaussian_split):
    tr, te = gaussian_split
    cfg = TrainConfig(lam=1e-3, T=1000, rescale_at=400, seed=2)
    _, trace = train(tr, cfg, te)
    s = trace.column("s")
    assert np.all(s[trace.column("cost") <= 400] == 1.0)
    assert np.all(s[trace.column("cost") > 400] == s[-1])
    assert s[-1] != 1.0


def test_rescale_uses_new_scale_in_updates(gaussian_split):
    tr, _ = gaussian_split
    cfg = TrainConfig(lam=1e-3, T=700, rescale_at=400, seed=2)
    w, trace = train(tr, cfg)
    # replay by hand: first 400 steps at s=1, then the rest at the new scale
    rng = np.random.default_rng(2)
    w0 = init_weights(tr.d, rng)
    idx = rng.integers(0, tr.n, size=700)
    r = 1 / math.sqrt(1e-3)
    mid = _kernels.sgd_margin_steps(tr.X, tr.y, w0, idx[:400], 0, 1.0, 1.0, 1e-3, r)
    s_new = trace[-1].s
    end = _kernels.sgd_margin_steps(tr.X, tr.y, mid, idx[400:], 400, s_new, 1.0, 1e-3, r)
    assert np.array_equal(w, end)


def test_record_objective_is_regularized(gaussian_split):
    tr, _ = gaussian_split
    cfg = TrainConfig(lam=0.5, T=10, seed=4)
    w, trace = train(tr, cfg)
    assert trace[-1].objective == pytest.approx(objective(w, tr, cfg.loss) + 0.25 * w @ w)
    assert math.isnan(trace[-1].test_err)
