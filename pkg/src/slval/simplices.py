"""Canonical simplices and the dissection maps used by the uniqueness arguments.

``T^d = [o, e_1, ..., e_d]``; the hyperplane ``H_lambda`` has normal
``(1 - lambda) e_1 - lambda e_2`` and passes through the origin.
"""

from fractions import Fraction

import numpy as np

from slval._exact import to_fraction
from slval.polytope import Halfspace, LinearMap, Polytope


def _unit(i, n, s=1):
    return tuple(Fraction(s) if j == i else Fraction(0) for j in range(n))


def standard_simplex(d, n, s=1):
    """s T^d, the simplex with vertices o, s e_1, ..., s e_d."""
    s = to_fraction(s)
    return Polytope([(Fraction(0),) * n] + [_unit(i, n, s) for i in range(d)], n=n)


def hat_simplex(d, n, s=1):
    """s hat-T^{d-1} = s [o, e_1, e_3, ..., e_d] (the e_2 vertex removed)."""
    s = to_fraction(s)
    idx = [0] + list(range(2, d))
    return Polytope([(Fraction(0),) * n] + [_unit(i, n, s) for i in idx], n=n)


def shifted_simplex(d, n, s=1):
    """s [e_1, ..., e_d]; empty for d = 0."""
    s = to_fraction(s)
    if d == 0:
        return Polytope.empty(n)
    return Polytope([_unit(i, n, s) for i in range(d)], n=n)


def axis_point(t, n):
    """t e_n as a float vector."""
    x = np.zeros(n)
    x[-1] = t
    return x


def dissection_halfspace(lam, n, side="-"):
    """H_lambda^- = {x.a <= 0} or H_lambda^+ = {x.a >= 0}, a = (1-lam)e_1 - lam e_2."""
    lam = to_fraction(lam)
    a = [Fraction(0)] * n
    a[0], a[1] = 1 - lam, -lam
    H = Halfspace(a, 0)
    if side == "-":
        return H
    if side == "+":
        return H.complement()
    raise ValueError("side must be '-' or '+'")


def _columns(cols):
    n = len(cols)
    return LinearMap([[cols[j][i] for j in range(n)] for i in range(n)])


def phi1(lam, n):
    """e_1 -> lam e_1 + (1-lam) e_2, e_n -> e_n / lam, other e_i fixed."""
    lam = to_fraction(lam)
    cols = [list(_unit(i, n)) for i in range(n)]
    cols[0] = [Fraction(0)] * n
    cols[0][0], cols[0][1] = lam, 1 - lam
    cols[n - 1] = list(_unit(n - 1, n, 1 / lam))
    return _columns(cols)


def phi2(lam, n):
    """e_2 -> lam e_1 + (1-lam) e_2, e_n -> e_n / (1-lam), other e_i fixed."""
    lam = to_fraction(lam)
    cols = [list(_unit(i, n)) for i in range(n)]
    cols[1] = [Fraction(0)] * n
    cols[1][0], cols[1][1] = lam, 1 - lam
    cols[n - 1] = list(_unit(n - 1, n, 1 / (1 - lam)))
    return _columns(cols)


def psi3(lam, n):
    """lam^{1/n} phi_3: e_1 -> lam e_1 + (1-lam) e_2, other e_i fixed (rational)."""
    lam = to_fraction(lam)
    cols = [list(_unit(i, n)) for i in range(n)]
    cols[0] = [Fraction(0)] * n
    cols[0][0], cols[0][1] = lam, 1 - lam
    return _columns(cols)


def psi4(lam, n):
    """(1-lam)^{1/n} phi_4: e_2 -> lam e_1 + (1-lam) e_2, other e_i fixed (rational)."""
    lam = to_fraction(lam)
    cols = [list(_unit(i, n)) for i in range(n)]
    cols[1] = [Fraction(0)] * n
    cols[1][0], cols[1][1] = lam, 1 - lam
    return _columns(cols)


def phi3(lam, n):
    """The SL(n) map lam^{-1/n} psi3 (floating point entries)."""
    return psi3(lam, n).as_array() * float(lam) ** (-1.0 / n)


def phi4(lam, n):
    """The SL(n) map (1-lam)^{-1/n} psi4 (floating point entries)."""
    return psi4(lam, n).as_array() * (1.0 - float(lam)) ** (-1.0 / n)
