"""Integer and rational helpers used by the exact geometric predicates."""

from fractions import Fraction
from math import gcd


def to_fraction(value):
    """Convert a number or a ``"p/q"`` / decimal string to an exact Fraction.

    Floats are converted exactly (binary value), never via their decimal repr.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise ValueError("non-finite coordinate")
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    # numpy scalars and the like
    if hasattr(value, "item"):
        return to_fraction(value.item())
    raise TypeError("cannot convert %r to an exact coordinate" % (value,))


def lcm(a, b):
    return a // gcd(a, b) * b


def common_denominator(points):
    den = 1
    for p in points:
        for c in p:
            den = lcm(den, c.denominator)
    return den


def scale_to_integers(points):
    """Return (L, int_points) with int_points = L * points."""
    den = common_denominator(points)
    return den, [tuple(int(c * den) for c in p) for p in points]


def primitive(vec):
    """Divide an integer vector by the gcd of its entries."""
    g = 0
    for v in vec:
        g = gcd(g, v)
    if g == 0:
        return tuple(vec)
    return tuple(v // g for v in vec)


def int_det(rows):
    """Determinant of a square integer matrix (Bareiss elimination)."""
    m = [list(r) for r in rows]
    size = len(m)
    if size == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(size - 1):
        if m[k][k] == 0:
            for i in range(k + 1, size):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, size):
            mik = m[i][k]
            row_i = m[i]
            row_k = m[k]
            for j in range(k + 1, size):
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
        prev = pivot
    return sign * m[size - 1][size - 1]


def int_cross(rows):
    """Generalized cross product of d-1 integer vectors in Z^d.

    Returns N with det([rows; y]) == N . y for every y.
    """
    d = len(rows) + 1
    out = []
    for j in range(d):
        minor = [r[:j] + r[j + 1:] for r in rows]
        sgn = -1 if (d - 1 + j) % 2 else 1
        out.append(sgn * int_det(minor))
    return tuple(out)


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


class EchelonBasis:
    """Incrementally maintained reduced row-echelon basis over the rationals."""

    def __init__(self, dim):
        self.dim = dim
        self.rows = []  # (pivot column, row with 1 at pivot)

    @property
    def rank(self):
        return len(self.rows)

    @property
    def pivots(self):
        return tuple(sorted(p for p, _ in self.rows))

    def reduce(self, vec):
        v = [Fraction(x) for x in vec]
        for piv, row in self.rows:
            f = v[piv]
            if f:
                v = [a - f * b for a, b in zip(v, row)]
        return v

    def add(self, vec):
        """Add ``vec`` to the span; return True if the rank grew."""
        v = self.reduce(vec)
        piv = next((i for i, x in enumerate(v) if x != 0), None)
        if piv is None:
            return False
        inv = 1 / v[piv]
        v = [x * inv for x in v]
        new_rows = []
        for p, row in self.rows:
            f = row[piv]
            if f:
                row = [a - f * b for a, b in zip(row, v)]
            new_rows.append((p, row))
        new_rows.append((piv, v))
        self.rows = new_rows
        return True

    def contains(self, vec):
        return all(x == 0 for x in self.reduce(vec))
