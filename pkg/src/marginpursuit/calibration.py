"""Classification calibration of the margin surrogate.

For a conditional positive-class probability ``eta``, the conditional risk
``C_eta(u) = eta*phi(u) + (1-eta)*phi(-u)`` is convex in ``u``. Its minimizer
solves ``eta*psi(g - u) = (1-eta)*psi(g + u)`` (working at unit scale with
``g = gamma/s``). On each stretch where neither ``psi`` term is saturated, or
only one of them is, this condition is a cubic in ``u``:

* double-cube: both ``g - u`` and ``g + u`` inside ``[-sqrt2, sqrt2]``;
* minus single-cube: ``g + u >= sqrt2`` (saturated), used when ``eta > 1/2``;
* plus single-cube: ``g - u >= sqrt2`` (saturated), used when ``eta < 1/2``.

Which one applies is decided from ``g`` and a test at the boundary
``+-delta`` with ``delta = |sqrt2 - g|``.
"""
import csv
from dataclasses import dataclass

import numpy as np

from .cubic import solve_cubic
from .loss import PSI_MAX, SQRT2, ScaledLoss, psi, rho, surrogate_phi

#: Slack on the admissible-interval ends, relative to ``g``.
INTERVAL_SLACK = 1e-12


class CalibrationError(RuntimeError):
    """No admissible root of the first-order condition was found."""


def _check_eta(eta):
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta!r}")


def conditional_risk(u, eta, loss):
    _check_eta(eta)
    return eta * surrogate_phi(u, loss) + (1.0 - eta) * surrogate_phi(-np.asarray(u), loss)


def first_order_residual(u, eta, g):
    """``eta*psi(g - u) - (1-eta)*psi(g + u)`` at unit scale."""
    return eta * psi(g - u) - (1.0 - eta) * psi(g + u)


def double_cube(eta, g):
    """Cubic coefficients when neither influence term is saturated.

    Multiplied through by ``eta`` so the leading coefficient is 1 and the
    coefficients stay bounded as ``eta -> 0``.
    """
    t = 2.0 * eta - 1.0
    return (1.0, -3.0 * g * t, 3.0 * (g * g - 2.0), t * (6.0 * g - g**3))


def minus_single_cube(eta, g):
    """Cubic in ``v = u - g`` for ``psi(v) = alpha * psi(sqrt2)``, ``alpha = (eta-1)/eta``.

    Expanded in ``u`` this is ``(1, -3g, 3g**2 - 6, 6g - g**3 + 6*alpha*psi(sqrt2))``.
    """
    alpha = (eta - 1.0) / eta
    return (1.0, 0.0, -6.0, 6.0 * alpha * PSI_MAX)


def plus_single_cube(eta, g):
    """Cubic in ``v = u + g`` for ``psi(v) = -psi(sqrt2) / alpha``.

    Expanded in ``u`` this is ``(1, 3g, 3g**2 - 6, g**3 - 6g - 6*psi(sqrt2)/alpha)``.
    """
    inv_alpha = eta / (eta - 1.0)
    return (1.0, 0.0, -6.0, -6.0 * PSI_MAX * inv_alpha)


def _ratio(u, g):
    return psi(u - g) / psi(u + g)


def _pick_root(coeffs, lo, hi, eta, g, shift=0.0):
    slack = INTERVAL_SLACK * g
    roots = [r + shift for r in solve_cubic(coeffs).values]
    roots = [r for r in roots if lo - slack < r < hi + slack]
    if not roots:
        raise CalibrationError(
            f"no root of {coeffs} in ({lo}, {hi}) for eta={eta}, gamma/s={g}"
        )
    return min(roots, key=lambda r: abs(first_order_residual(r, eta, g)))


def unit_minimizer(eta, g):
    """Minimizer of the unit-scale conditional risk with margin level ``g > 0``."""
    _check_eta(eta)
    if eta == 0.0:
        return -g
    if eta == 1.0:
        return g
    if eta == 0.5:
        return 0.0
    alpha = (eta - 1.0) / eta
    if g <= SQRT2 / 2:
        return _pick_root(double_cube(eta, g), -g, g, eta, g)
    delta = abs(SQRT2 - g)
    if g < SQRT2:
        if eta > 0.5 and _ratio(delta, g) < alpha:
            return _pick_root(minus_single_cube(eta, g), delta, g, eta, g, shift=g)
        if eta < 0.5 and _ratio(-delta, g) > alpha:
            return _pick_root(plus_single_cube(eta, g), -g, -delta, eta, g, shift=-g)
        return _pick_root(double_cube(eta, g), -g, g, eta, g)
    if eta > 0.5:
        return _pick_root(minus_single_cube(eta, g), delta, g, eta, g, shift=g)
    return _pick_root(plus_single_cube(eta, g), -g, -delta, eta, g, shift=-g)


def optimal_conditional_risk(eta, loss):
    """Return ``(H, u_star)``: the minimal conditional risk and its minimizer."""
    _check_eta(eta)
    if loss.gamma <= 0:
        raise ValueError("calibration needs gamma > 0")
    u_star = loss.s * unit_minimizer(eta, loss.gamma / loss.s)
    return float(conditional_risk(u_star, eta, loss)), float(u_star)


def psi_transform(u, loss):
    """Calibration transform ``s**2*rho(gamma/s) - H((1+u)/2)`` for ``u`` in [0, 1]."""
    if not 0.0 <= u <= 1.0:
        raise ValueError(f"u must lie in [0, 1], got {u!r}")
    peak = loss.s**2 * float(rho(loss.gamma / loss.s))
    return peak - optimal_conditional_risk((1.0 + u) / 2.0, loss)[0]


@dataclass(frozen=True, eq=False)
class PsiTable:
    """Calibration transform sampled on a uniform grid over [0, 1]."""

    s: float
    gamma: float
    grid: np.ndarray
    values: np.ndarray

    def inverse(self, a):
        return psi_inverse(a, self)

    def to_csv(self, path_or_file):
        own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
        fh = open(path_or_file, "w", newline="", encoding="utf-8") if own else path_or_file
        try:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["u", "psi"])
            for u, v in zip(self.grid, self.values):
                w.writerow([format(u, ".17g"), format(v, ".17g")])
        finally:
            if own:
                fh.close()


def build_psi_table(loss, K=2500):
    if K < 2:
        raise ValueError("K must be at least 2")
    grid = np.linspace(0.0, 1.0, K)
    values = np.array([psi_transform(float(u), loss) for u in grid])
    grid.setflags(write=False)
    values.setflags(write=False)
    return PsiTable(loss.s, loss.gamma, grid, values)


def psi_inverse(a, table):
    """Grid inverse: the largest grid point whose transform value is ``<= a``."""
    if a < 0:
        raise ValueError("a must be nonnegative")
    k = int(np.flatnonzero(table.values <= a).max())
    return float(table.grid[k])


def psi_table(s=1.0, gamma=1.0, K=2500):
    return build_psi_table(ScaledLoss(s, gamma), K)

