import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from marginpursuit.data import Dataset
from marginpursuit.loss import (
    PSI_MAX, ScaledLoss, objective, objective_gradient, psi, rho, rho_second, surrogate_phi,
)

from conftest import random_dataset

R2 = math.sqrt(2.0)
reals = st.floats(-50, 50, allow_nan=False)


@pytest.mark.parametrize("u, expected", [
    (0.0, 0.0),
    (R2, 2 * R2 / 3),
    (1.0, 5 / 6),
    (-3.0, -2 * R2 / 3),
])
def test_psi_values(u, expected):
    assert psi(u) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("u, expected", [
    (0.0, 0.0),
    (R2, 5 / 6),
    (2.0, 4 * R2 / 3 - 0.5),
])
def test_rho_values(u, expected):
    assert rho(u) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("u, expected", [(0.0, 1.0), (R2, 0.0), (-R2, 0.0), (5.0, 0.0)])
def test_rho_second_values(u, expected):
    assert rho_second(u) == expected


def test_branches_agree_at_knot():
    below, above = np.nextafter(R2, 0), np.nextafter(R2, 10)
    assert abs(rho(below) - rho(above)) < 1e-14
    assert abs(psi(below) - psi(above)) < 1e-14


def test_array_and_scalar_inputs():
    u = np.linspace(-3, 3, 7)
    assert psi(u).shape == (7,)
    assert np.isscalar(psi(0.3)) or np.ndim(psi(0.3)) == 0


@given(reals)
def test_symmetries_and_ranges(u):
    assert rho(u) >= 0
    assert rho(u) == rho(-u)
    assert psi(-u) == -psi(u)
    assert abs(psi(u)) <= PSI_MAX
    assert 0.0 <= rho_second(u) <= 1.0


@given(reals, reals)
def test_rho_lipschitz(u, v):
    assert abs(rho(u) - rho(v)) <= PSI_MAX * abs(u - v) + 1e-12


def test_rho_derivative_is_psi():
    u = np.linspace(-5, 5, 2001)
    h = 1e-6
    fd = (rho(u + h) - rho(u - h)) / (2 * h)
    assert np.allclose(fd, psi(u), rtol=1e-6, atol=1e-8)


def test_surrogate_phi_values():
    loss = ScaledLoss(1.0, 1.0)
    assert surrogate_phi(1.0, loss) == 0.0
    assert surrogate_phi(0.0, loss) == pytest.approx(11 / 24, abs=1e-15)
    loss = ScaledLoss(2.5, 0.7)
    assert surrogate_phi(0.7 - R2 * 2.5, loss) == pytest.approx(2.5**2 * 5 / 6, rel=1e-14)


def test_surrogate_slope_negative_at_zero():
    for s, g in [(0.3, 0.1), (1.0, 1.0), (10.0, 5.0)]:
        loss = ScaledLoss(s, g)
        assert surrogate_phi(1e-6, loss) < surrogate_phi(-1e-6, loss)


def test_scaled_loss_validation():
    with pytest.raises(ValueError):
        ScaledLoss(0.0, 1.0)
    with pytest.raises(ValueError):
        ScaledLoss(-1.0, 1.0)


def _one_point(margin_target):
    return Dataset(np.array([[1.0, 0.0]]), np.array([1.0])), np.array([margin_target, 0.0])


def test_objective_trivial_cases():
    loss = ScaledLoss(1.0, 1.0)
    data, w = _one_point(1.0)
    assert objective(w, data, loss) == 0.0
    loss = ScaledLoss(2.0, 3.0)
    data, w = _one_point(1.0)  # margin gamma - s
    assert objective(w, data, loss) == pytest.approx(4.0 * rho(1.0), rel=1e-15)


def test_objective_matches_fsum_oracle(rng):
    for _ in range(20):
        data = random_dataset(rng, 15, 4)
        w = rng.normal(size=4)
        loss = ScaledLoss(rng.uniform(0.2, 3), rng.uniform(-1, 2))
        terms = []
        for xi, yi in zip(data.X, data.y):
            m = yi * math.fsum(a * b for a, b in zip(xi, w))
            z = (loss.gamma - m) / loss.s
            r = z * z / 2 - z**4 / 24 if abs(z) <= R2 else abs(z) * 2 * R2 / 3 - 0.5
            terms.append(loss.s**2 * r)
        assert objective(w, data, loss) == pytest.approx(math.fsum(terms) / len(terms), rel=1e-13)


def test_gradient_trivial_cases():
    loss = ScaledLoss(1.0, 1.0)
    data, w = _one_point(1.0)
    assert np.array_equal(objective_gradient(w, data, loss), np.zeros(2))
    data, w = _one_point(0.0)
    assert np.allclose(objective_gradient(w, data, loss), [-5 / 6, 0.0], atol=1e-15)


def central_difference(f, w):
    g = np.empty_like(w)
    for j in range(w.size):
        h = 1e-6 * (1 + abs(w[j]))
        e = np.zeros_like(w)
        e[j] = h
        g[j] = (f(w + e) - f(w - e)) / (2 * h)
    return g


def test_gradient_matches_finite_differences(rng):
    for _ in range(20):
        n, d = rng.integers(1, 21), rng.integers(1, 11)
        data = random_dataset(rng, n, d)
        w = rng.normal(size=d)
        loss = ScaledLoss(rng.uniform(0.5, 3), rng.uniform(0, 2))
        g = objective_gradient(w, data, loss)
        fd = central_difference(lambda v: objective(v, data, loss), w)
        assert np.linalg.norm(g - fd) <= 1e-6 * max(1.0, np.linalg.norm(g))


def test_objective_convex_along_segments(rng):
    for _ in range(50):
        data = random_dataset(rng, 12, 3)
        loss = ScaledLoss(rng.uniform(0.3, 2), 1.0)
        w1, w2 = rng.normal(size=3) * 3, rng.normal(size=3) * 3
        t = rng.random()
        lhs = objective(t * w1 + (1 - t) * w2, data, loss)
        rhs = t * objective(w1, data, loss) + (1 - t) * objective(w2, data, loss)
        assert lhs <= rhs + 1e-12


def test_dimension_mismatch():
    data = Dataset(np.ones((3, 2)), np.ones(3))
    with pytest.raises(ValueError):
        objective(np.ones(3), data, ScaledLoss())
    with pytest.raises(ValueError):
        objective_gradient(np.ones(1), data, ScaledLoss())
