"""Generating functions zeta: R -> R for the valuations Z_zeta."""

import json
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

VARIANTS = ("constant", "power_plus", "power_minus", "abs_power", "poly", "table")

_JSON_KEYS = {
    "constant": {"c"},
    "power_plus": {"p"},
    "power_minus": {"p"},
    "abs_power": {"p"},
    "poly": {"coeffs"},
    "table": {"knots", "values", "end_slopes"},
}


@dataclass(frozen=True)
class ZetaSpec:
    """A continuous function of one real variable from a closed family.

    ``poly`` coefficients are in ascending order (``coeffs[k]`` multiplies
    ``t**k``).  ``table`` is piecewise linear through ``(knots, values)`` and
    extends linearly with the two ``end_slopes`` outside the knot range.
    """

    variant: str
    c: float = 0.0
    p: float = 1.0
    coeffs: tuple = ()
    knots: tuple = ()
    values: tuple = ()
    end_slopes: tuple = (0.0, 0.0)

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError("unknown zeta variant %r" % self.variant)
        if self.variant in ("power_plus", "power_minus", "abs_power") and not self.p > 0:
            raise ValueError("power variants need p > 0")
        if self.variant == "poly" and not self.coeffs:
            raise ValueError("poly needs at least one coefficient")
        if self.variant == "table":
            k = np.asarray(self.knots, dtype=float)
            if len(k) == 0 or len(k) != len(self.values):
                raise ValueError("table needs matching, nonempty knots and values")
            if np.any(np.diff(k) <= 0):
                raise ValueError("table knots must be strictly increasing")
            if len(self.end_slopes) != 2:
                raise ValueError("table needs two end slopes")

    # constructors
    @classmethod
    def constant(cls, c):
        return cls("constant", c=float(c))

    @classmethod
    def power_plus(cls, p):
        return cls("power_plus", p=float(p))

    @classmethod
    def power_minus(cls, p):
        return cls("power_minus", p=float(p))

    @classmethod
    def abs_power(cls, p):
        return cls("abs_power", p=float(p))

    @classmethod
    def poly(cls, *coeffs):
        if len(coeffs) == 1 and not np.isscalar(coeffs[0]):
            coeffs = tuple(coeffs[0])
        return cls("poly", coeffs=tuple(float(c) for c in coeffs))

    @classmethod
    def table(cls, knots, values, end_slopes=(0.0, 0.0)):
        return cls("table", knots=tuple(float(k) for k in knots),
                   values=tuple(float(v) for v in values),
                   end_slopes=tuple(float(s) for s in end_slopes))

    @classmethod
    def sample(cls, f, knots, end_slopes=None):
        """Tabulate a callable on ``knots``; end slopes default to the outer chords."""
        knots = np.asarray(knots, dtype=float)
        values = np.asarray(f(knots), dtype=float)
        if end_slopes is None:
            if len(knots) > 1:
                end_slopes = ((values[1] - values[0]) / (knots[1] - knots[0]),
                              (values[-1] - values[-2]) / (knots[-1] - knots[-2]))
            else:
                end_slopes = (0.0, 0.0)
        return cls.table(knots, values, end_slopes)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        v = self.variant
        if v == "constant":
            return np.full(t.shape, self.c)
        if v == "power_plus":
            return np.maximum(t, 0.0) ** self.p
        if v == "power_minus":
            return np.maximum(-t, 0.0) ** self.p
        if v == "abs_power":
            return np.abs(t) ** self.p
        if v == "poly":
            return npoly.polyval(t, np.asarray(self.coeffs))
        k = np.asarray(self.knots)
        vals = np.asarray(self.values)
        out = np.interp(t, k, vals)
        out = np.where(t < k[0], vals[0] + self.end_slopes[0] * (t - k[0]), out)
        return np.where(t > k[-1], vals[-1] + self.end_slopes[1] * (t - k[-1]), out)

    # structural flags
    @property
    def is_sublinear(self):
        """zeta(t)/t -> 0 as |t| -> infinity."""
        v = self.variant
        if v == "constant":
            return True
        if v in ("power_plus", "power_minus", "abs_power"):
            return self.p < 1
        if v == "poly":
            return len(np.trim_zeros(np.asarray(self.coeffs), "b")) <= 1
        return self.end_slopes[0] == 0 and self.end_slopes[1] == 0

    @property
    def is_convex(self):
        v = self.variant
        if v == "constant":
            return True
        if v in ("power_plus", "power_minus", "abs_power"):
            return self.p >= 1
        if v == "poly":
            second = npoly.polyder(np.trim_zeros(np.asarray(self.coeffs), "b"), 2)
            second = np.trim_zeros(second, "b")
            if len(second) == 0:
                return True
            if len(second) % 2 == 0 or second[-1] < 0:
                return False
            if len(second) == 1:
                return second[0] >= 0
            crit = [r.real for r in np.atleast_1d(npoly.polyroots(npoly.polyder(second)))
                    if abs(r.imag) < 1e-12]
            return all(npoly.polyval(r, second) >= -1e-12 for r in crit)
        k = np.asarray(self.knots)
        vals = np.asarray(self.values)
        slopes = [self.end_slopes[0]] + list(np.diff(vals) / np.diff(k)) + [self.end_slopes[1]]
        return bool(np.all(np.diff(slopes) >= -1e-12))

    @property
    def is_nonnegative(self):
        v = self.variant
        if v == "constant":
            return self.c >= 0
        if v in ("power_plus", "power_minus", "abs_power"):
            return True
        if v == "table":
            return (min(self.values) >= 0 and self.end_slopes[0] <= 0
                    and self.end_slopes[1] >= 0)
        if not self.is_convex:
            return False
        # convex polynomial: check the value at its minimizers
        c = np.trim_zeros(np.asarray(self.coeffs), "b")
        if len(c) <= 1:
            return len(c) == 0 or c[0] >= 0
        if len(c) == 2:
            return c[1] == 0 and c[0] >= 0
        crit = [r.real for r in np.atleast_1d(npoly.polyroots(npoly.polyder(c)))
                if abs(r.imag) < 1e-12]
        return all(npoly.polyval(r, c) >= -1e-12 for r in crit)

    @property
    def is_orlicz(self):
        """Convex, nonnegative, zero at zero, and not identically zero."""
        zero = float(self(0.0))
        probe = self(np.array([-1.0, 1.0, -10.0, 10.0]))
        return (self.is_convex and self.is_nonnegative and zero == 0.0
                and bool(np.any(probe > 0)))

    def to_json(self):
        v = self.variant
        if v == "constant":
            return {"variant": v, "c": self.c}
        if v in ("power_plus", "power_minus", "abs_power"):
            return {"variant": v, "p": self.p}
        if v == "poly":
            return {"variant": v, "coeffs": list(self.coeffs)}
        return {"variant": v, "knots": list(self.knots), "values": list(self.values),
                "end_slopes": list(self.end_slopes)}

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        v = data.get("variant")
        if v not in VARIANTS:
            raise ValueError("unknown zeta variant %r" % v)
        allowed = _JSON_KEYS[v] | {"variant"}
        unknown = set(data) - allowed
        if unknown:
            raise ValueError("unknown keys for %s: %s" % (v, sorted(unknown)))
        if v == "constant":
            return cls.constant(data["c"])
        if v in ("power_plus", "power_minus", "abs_power"):
            return cls(v, p=float(data["p"]))
        if v == "poly":
            return cls.poly(data["coeffs"])
        return cls.table(data["knots"], data["values"], data.get("end_slopes", (0, 0)))
