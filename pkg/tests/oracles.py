"""Independent reference implementations used only by the tests."""
import math

import numpy as np


def _bisect(f, lo, hi, iters=200):
    flo = f(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        fm = f(mid)
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def bracket_roots(a, b, c, d):
    """Real roots by sign changes between the critical points of the cubic.

    The cubic is monotone between consecutive critical points, so every
    simple root is bracketed by exactly one piece.
    """
    f = lambda u: ((a * u + b) * u + c) * u + d
    bound = 1.0 + max(abs(b), abs(c), abs(d)) / abs(a)  # Cauchy bound
    crit = []
    disc = 4 * b * b - 12 * a * c
    if disc > 0:
        r = math.sqrt(disc)
        crit = sorted([(-2 * b - r) / (6 * a), (-2 * b + r) / (6 * a)])
    knots = [-bound] + [x for x in crit if -bound < x < bound] + [bound]
    roots = []
    for lo, hi in zip(knots[:-1], knots[1:]):
        flo, fhi = f(lo), f(hi)
        if flo == 0:
            roots.append(lo)
        elif flo * fhi < 0:
            roots.append(_bisect(f, lo, hi))
    if f(knots[-1]) == 0:
        roots.append(knots[-1])
    return roots


def grid_argmin(f, lo, hi, points):
    u = np.linspace(lo, hi, points)
    return u[np.argmin(f(u))]


def grid_minimize(f, lo, hi, points=20001):
    """Coarse grid search, then golden-section refinement around the best cell."""
    u = np.linspace(lo, hi, points)
    vals = f(u)
    i = int(np.argmin(vals))
    a, b = u[max(i - 1, 0)], u[min(i + 1, points - 1)]
    g = (math.sqrt(5) - 1) / 2
    c, d = b - g * (b - a), a + g * (b - a)
    for _ in range(200):
        if b - a <= 1e-15 * max(1.0, abs(a)):
            break
        if f(c) < f(d):
            b, d = d, c
            c = b - g * (b - a)
        else:
            a, c = c, d
            d = a + g * (b - a)
    x = 0.5 * (a + b)
    return float(f(x)), x
