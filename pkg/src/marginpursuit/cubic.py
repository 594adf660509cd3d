"""Real roots of ``a*u**3 + b*u**2 + c*u + d`` by discriminant case.

* ``disc < 0``: one real root, Cardano's formula with a real cube root.
* ``disc == 0``: a triple root, or a double root plus a single root.
* ``disc > 0``: three distinct real roots, trigonometric (Viete) method.

Floating-point discriminants are treated as zero inside a band relative to
the largest term of their expansion, which is the scale of the rounding error.
"""
import math
from dataclasses import dataclass

#: Band, relative to the largest term, for treating the discriminant (and
#: ``b**2 - 3ac``) as zero.
ZERO_EPS = 1e-12


#: Relative residual above which a reported double root is rejected.
DOUBLE_ROOT_CHECK = 1e-8


@dataclass(frozen=True)
class CubicPoly:
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if self.a == 0:
            raise ValueError("leading coefficient a must be nonzero")

    def __call__(self, u):
        return ((self.a * u + self.b) * u + self.c) * u + self.d

    def derivative(self, u):
        return (3.0 * self.a * u + 2.0 * self.b) * u + self.c

    @property
    def size(self):
        return abs(self.a) + abs(self.b) + abs(self.c) + abs(self.d)


@dataclass(frozen=True)
class RootSet:
    """Real roots as ``(value, multiplicity)`` pairs in ascending order."""

    roots: tuple
    discriminant: float

    @property
    def values(self):
        return tuple(r for r, _ in self.roots)

    def __len__(self):
        return len(self.roots)


def _poly(p):
    return p if isinstance(p, CubicPoly) else CubicPoly(*p)


def _disc_terms(p):
    a, b, c, d = p.a, p.b, p.c, p.d
    return (18 * a * b * c * d, -4 * b**3 * d, b * b * c * c, -4 * a * c**3, -27 * a * a * d * d)


def discriminant(p):
    return math.fsum(_disc_terms(_poly(p)))


def _polish(p, r):
    """One Newton step, kept only if it lowers the residual."""
    dp = p.derivative(r)
    if dp == 0 or not math.isfinite(dp):
        return r
    cand = r - p(r) / dp
    return cand if abs(p(cand)) < abs(p(r)) else r


def _cardano(p, d0):
    a, b, c, d = p.a, p.b, p.c, p.d
    d1 = 2 * b**3 - 9 * a * b * c + 27 * a * a * d
    rad = math.sqrt(max(d1 * d1 - 4 * d0**3, 0.0))
    # sqrt sign follows d1 so the sum does not cancel; both branches give the same root
    total = d1 + rad if d1 >= 0 else d1 - rad
    cube = (abs(total) / 2.0) ** (1.0 / 3.0)
    C = cube if total >= 0 else -cube
    if C == 0.0:
        return -b / (3 * a)
    return -(b + C + d0 / C) / (3 * a)


def _viete(p):
    a, b, c, d = p.a, p.b, p.c, p.d
    pp = (3 * a * c - b * b) / (3 * a * a)
    qq = (2 * b**3 - 9 * a * b * c + 27 * a * a * d) / (27 * a**3)
    if pp >= 0:
        raise ArithmeticError("positive discriminant but depressed p >= 0")
    k = math.sqrt(-pp / 3.0)
    e = -qq / (2.0 * k**3)
    x = math.acos(min(1.0, max(-1.0, e))) / 3.0
    shift = b / (3 * a)
    tau = 2.0 * math.pi / 3.0
    return [2 * k * math.cos(x) - shift,
            2 * k * math.cos(tau + x) - shift,
            2 * k * math.cos(tau - x) - shift]


def viete_argument(p):
    """``-q / (2 k**3)`` of the depressed cubic; inside (-1, 1) when disc > 0."""
    p = _poly(p)
    a, b, c, d = p.a, p.b, p.c, p.d
    pp = (3 * a * c - b * b) / (3 * a * a)
    qq = (2 * b**3 - 9 * a * b * c + 27 * a * a * d) / (27 * a**3)
    return -qq / (2.0 * math.sqrt(-pp / 3.0) ** 3)


def _rel_residual(p, u):
    scale = ((abs(p.a) * abs(u) + abs(p.b)) * abs(u) + abs(p.c)) * abs(u) + abs(p.d)
    return abs(p(u)) / scale if scale > 0 else 0.0


def _normalize(p):
    """Monic cubic in ``v = u / k`` with ``k`` a root-size bound, so roots are O(1).

    Keeps the discriminant terms away from overflow and underflow whatever
    the scale of the coefficients or of the roots. ``k == 0`` means ``u**3``.
    """
    b, c, d = p.b / p.a, p.c / p.a, p.d / p.a
    k = max(abs(b), math.sqrt(abs(c)), abs(d) ** (1.0 / 3.0))
    if k == 0.0:
        return p, 0.0
    k = math.ldexp(1.0, math.frexp(k)[1])  # power of two: rescaling is exact
    return CubicPoly(1.0, b / k, c / k / k, d / k / k / k), k


def solve_cubic(p, polish=True):
    """Real roots with multiplicities.

    Parameters
    ----------
    p : CubicPoly or sequence of four floats
        Coefficients ``(a, b, c, d)``, ``a != 0``.
    polish : bool
        Apply one guarded Newton step to each closed-form root.

    Returns
    -------
    RootSet
    """
    p = _poly(p)
    q, k = _normalize(p)
    if k == 0.0:
        return RootSet(((0.0, 3),), 0.0)
    a, b, c = q.a, q.b, q.c
    terms = _disc_terms(q)
    qdisc = math.fsum(terms)
    d0 = b * b - 3 * a * c
    if abs(qdisc) <= ZERO_EPS * max(map(abs, terms)):
        if abs(d0) <= ZERO_EPS * max(b * b, abs(3 * a * c)):
            r = -b / (3 * a)
            roots = [(r, 3)]
        else:
            u_double = (9 * a * q.d - b * c) / (2 * d0)
            u_single = (4 * a * b * c - 9 * a * a * q.d - b**3) / (a * d0)
            roots = [(u_double, 2), (u_single, 1)]
    elif qdisc < 0:
        roots = [(_cardano(q, d0), 1)]
    else:
        roots = [(r, 1) for r in _viete(q)]
    if polish:
        roots = [(_polish(q, r), m) for r, m in roots]
    roots = sorted((k * r, m) for r, m in roots)
    # a near-coincident complex pair can fall inside the zero band; a genuine
    # double root leaves a tiny residual, a complex pair does not
    roots = [(r, m) for r, m in roots if m != 2 or _rel_residual(p, r) <= DOUBLE_ROOT_CHECK]
    # disc(p) = a**4 * k**6 * disc(q); may overflow to inf for huge roots
    disc = 0.0 if qdisc == 0 else qdisc * p.a * p.a * p.a * p.a * k * k * k * k * k * k
    return RootSet(tuple(roots), disc)
