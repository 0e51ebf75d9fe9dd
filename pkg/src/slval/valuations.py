"""Function-valued valuations on polytopes and their linear combinations.

Every evaluator takes a polytope and either a single point ``x`` (shape
``(n,)``, returns a float) or a batch of points (shape ``(m, n)``, returns an
array of length ``m``).
"""

import json
from dataclasses import dataclass, replace
from math import factorial

import numpy as np

from slval.polytope import Polytope, hull_with_origin
from slval.zeta import ZetaSpec

P_O = "P_o"
P_FULL = "P_full"
SCOPES = (P_O, P_FULL)


class DomainError(ValueError):
    """The polytope or function lies outside the domain of a functional."""


def _points(P, x):
    X = np.asarray(x, dtype=float)
    single = X.ndim == 1
    X = np.atleast_2d(X)
    if X.shape[1] != P.n:
        raise ValueError("point dimension %d does not match R^%d" % (X.shape[1], P.n))
    return X, single


def _out(vals, single):
    return float(vals[0]) if single else vals


def _atoms(P, restricted):
    keys, offs, areas, weights, zero = P.facet_arrays
    if restricted:
        keep = ~zero
        return keys[keep], offs[keep], areas[keep], weights[keep]
    return keys, offs, areas, weights


def _unit(keys):
    return keys / np.linalg.norm(keys, axis=1, keepdims=True)


def _atom_sum(values, weights):
    # elementwise products summed pairwise; keeps opposite atoms cancelling exactly
    return (values * weights).sum(axis=1)


def zeta_valuation(P, zeta, x):
    """Z_zeta P(x): sum of zeta(x.u / h_P(u)) over cone-volume atoms off {h_P = 0}."""
    X, single = _points(P, x)
    keys, offs, _, weights = _atoms(P, restricted=True)
    if len(weights) == 0:
        return _out(np.zeros(len(X)), single)
    t = (X @ keys.T) / offs
    return _out(_atom_sum(np.asarray(zeta(t), dtype=float), weights), single)


def zeta_hull_valuation(P, zeta, x):
    """Z_zeta applied to the convex hull of P and the origin."""
    if P.is_empty:
        return zeta_valuation(P, zeta, x)
    return zeta_valuation(hull_with_origin(P), zeta, x)


def projection_function(P, x):
    """V_1(P, [-x, x]) = (1/n) sum |x.u| over the surface area measure."""
    X, single = _points(P, x)
    keys, _, areas, _ = _atoms(P, restricted=False)
    if len(areas) == 0:
        return _out(np.zeros(len(X)), single)
    vals = _atom_sum(np.abs(X @ _unit(keys).T), areas) / P.n
    return _out(vals, single)


def hull_projection_function(P, x):
    """V_1([P, o], [-x, x])."""
    if P.is_empty:
        return projection_function(P, x)
    return projection_function(hull_with_origin(P), x)


def lp_projection(P, p, x, mode="sym"):
    """The restricted L_p projection functions.

    ``mode`` is ``sym`` for |x.u|^p, ``plus``/``minus`` for (x.u)_+^p and
    (x.u)_-^p.  The sum runs over normals with h_P(u) != 0 and is written as
    an integral against the cone-volume measure, so it is defined for every
    polytope.  ``p = 0`` is only accepted in ``sym`` mode, where the integrand
    is the constant 1 (the restricted cone-volume mass).
    """
    if p < 0:
        raise ValueError("p must be nonnegative")
    if mode not in ("sym", "plus", "minus"):
        raise ValueError("mode must be sym, plus or minus")
    if p == 0:
        if mode != "sym":
            raise ValueError("asymmetric projection functions need p > 0")
        return zeta_valuation(P, ZetaSpec.constant(1.0), x)
    zeta = {"sym": ZetaSpec.abs_power, "plus": ZetaSpec.power_plus,
            "minus": ZetaSpec.power_minus}[mode](p)
    return zeta_valuation(P, zeta, x)


# --------------------------------------------------------------------------
# support oracles

def as_support(L):
    if isinstance(L, Polytope):
        return L.support
    if callable(L):
        return L
    raise TypeError("expected a Polytope or a support function")


def segment_support(x):
    """Support function of the segment [-x, x]."""
    x = np.asarray(x, dtype=float)
    return lambda u: np.abs(np.asarray(u) @ x)


def half_segment_support(x):
    """Support function of the segment [o, x]."""
    x = np.asarray(x, dtype=float)
    return lambda u: np.maximum(np.asarray(u) @ x, 0.0)


def lp_sum_support(h1, h2, p):
    """Support function of the L_p sum: (h1^p + h2^p)^(1/p)."""
    h1, h2 = as_support(h1), as_support(h2)
    return lambda u: (h1(u) ** p + h2(u) ** p) ** (1.0 / p)


def lp_mixed_volume(K, L, p, restricted=False):
    """(1/n) sum h_L(u)^p h_K(u)^(1-p) S_K(u) over the facet normals of K."""
    if p < 1:
        raise ValueError("L_p mixed volume needs p >= 1")
    h_L = as_support(L)
    keys, offs, areas, _ = _atoms(K, restricted=restricted and p != 1)
    if len(areas) == 0:
        return 0.0
    norms = np.linalg.norm(keys, axis=1)
    U = keys / norms[:, None]
    hK = offs / norms
    hL = np.asarray(h_L(U), dtype=float)
    if p == 1:
        return float((hL * areas).sum() / K.n)
    if np.any(offs <= 0):
        raise DomainError("L_p mixed volume with p > 1 needs the origin in the "
                          "interior of K (or restricted=True)")
    if np.any(hL < 0):
        raise DomainError("L must contain the origin for p > 1")
    return float((hL ** p * hK ** (1 - p) * areas).sum() / K.n)


def orlicz_mixed_volume(K, L, phi):
    """sum phi(h_L(u)/h_K(u)) over the cone-volume atoms of K."""
    if not K.origin_in_interior:
        raise DomainError("Orlicz mixed volume needs the origin in the interior of K")
    h_L = as_support(L)
    keys, offs, _, weights = _atoms(K, restricted=False)
    norms = np.linalg.norm(keys, axis=1)
    U = keys / norms[:, None]
    ratio = np.asarray(h_L(U), dtype=float) / (offs / norms)
    return float((np.asarray(phi(ratio), dtype=float) * weights).sum())


def orlicz_projection_support(K, zeta, x, rtol=1e-12, max_iter=200):
    """Support function of the Orlicz projection body of K at x.

    The smallest lambda > 0 with sum zeta(x.u / (lambda h_K(u))) w <= V_n(K)
    over the cone-volume atoms.  The left side is nonincreasing in lambda, so
    a doubling bracket followed by bisection finds it.
    """
    if isinstance(zeta, ZetaSpec) and not zeta.is_orlicz:
        raise DomainError("zeta must be convex, nonnegative, vanish at 0 and be nonzero")
    if not K.origin_in_interior:
        raise DomainError("Orlicz projection body needs the origin in the interior of K")
    x = np.asarray(x, dtype=float)
    if not np.any(x):
        return 0.0
    keys, offs, _, weights = _atoms(K, restricted=False)
    base = (keys @ x) / offs
    target = K.volume

    def excess(lam):
        return float((np.asarray(zeta(base / lam)) * weights).sum()) - target

    lo = hi = 1.0
    if excess(hi) <= 0:
        for _ in range(max_iter):
            lo = hi / 2
            if excess(lo) > 0:
                break
            hi = lo
        else:
            return 0.0
    else:
        for _ in range(max_iter):
            lo, hi = hi, hi * 2
            if excess(hi) <= 0:
                break
        else:
            raise RuntimeError("could not bracket the Orlicz projection support")
    for _ in range(max_iter):
        if hi - lo <= rtol * hi:
            break
        mid = 0.5 * (lo + hi)
        if excess(mid) <= 0:
            hi = mid
        else:
            lo = mid
    return hi


# --------------------------------------------------------------------------
# constant-valued valuations

def euler_characteristic(P):
    """V_0(P): 1 for nonempty P, 0 for the empty polytope."""
    return 0.0 if P.is_empty else 1.0


def signed_relint_indicator(P):
    """(-1)^dim P times the indicator of o in relint P."""
    if P.is_empty or not P.origin_in_relint:
        return 0.0
    return float((-1) ** P.dim)


def origin_indicator(P):
    """Indicator of o in P."""
    return 1.0 if P.contains_origin else 0.0


def hull_euler_characteristic(P):
    """V_0([P, o]); zero on the empty polytope."""
    return euler_characteristic(P)


def euler_term(P):
    return euler_characteristic(P)


def indicator_terms(P):
    """(signed relint indicator, origin indicator, V_0([P, o]))."""
    return (signed_relint_indicator(P), origin_indicator(P), hull_euler_characteristic(P))


def _constant(value, P, x):
    X, single = _points(P, x)
    return _out(np.full(len(X), value), single)


# --------------------------------------------------------------------------
# the representation formula

@dataclass(frozen=True)
class ValuationSpec:
    """Coefficients and generating functions of a representation.

    Scope ``P_o`` uses (c0, c0_prime, c_n1, zeta); scope ``P_full`` adds the
    hull terms (c_tilde0, c_tilde_n1, zeta_tilde).  ``zeta`` may be any
    vectorized callable; ZetaSpec instances serialize to JSON.
    """

    zeta: object = ZetaSpec.constant(0.0)
    c0: float = 0.0
    c0_prime: float = 0.0
    c_n1: float = 0.0
    scope: str = P_O
    c_tilde0: float = None
    c_tilde_n1: float = None
    zeta_tilde: object = None

    def __post_init__(self):
        if self.scope not in SCOPES:
            raise ValueError("scope must be P_o or P_full")
        tildes = (self.c_tilde0, self.c_tilde_n1, self.zeta_tilde)
        if self.scope == P_O and any(t is not None for t in tildes):
            raise ValueError("scope P_o leaves the hull coefficients unset")
        if self.scope == P_FULL:
            object.__setattr__(self, "c_tilde0", float(self.c_tilde0 or 0.0))
            object.__setattr__(self, "c_tilde_n1", float(self.c_tilde_n1 or 0.0))
            if self.zeta_tilde is None:
                object.__setattr__(self, "zeta_tilde", ZetaSpec.constant(0.0))

    def with_zetas(self, zeta, zeta_tilde=None):
        if self.scope == P_O:
            return replace(self, zeta=zeta)
        return replace(self, zeta=zeta, zeta_tilde=zeta_tilde)

    def to_json(self):
        def zjson(z):
            return z.to_json() if hasattr(z, "to_json") else None
        out = {"scope": self.scope, "c0": self.c0, "c0_prime": self.c0_prime,
               "c_n1": self.c_n1, "zeta": zjson(self.zeta)}
        if self.scope == P_FULL:
            out.update(c_tilde0=self.c_tilde0, c_tilde_n1=self.c_tilde_n1,
                       zeta_tilde=zjson(self.zeta_tilde))
        return out

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        scope = data.get("scope", P_O)
        allowed = {"scope", "c0", "c0_prime", "c_n1", "zeta"}
        if scope == P_FULL:
            allowed |= {"c_tilde0", "c_tilde_n1", "zeta_tilde"}
        unknown = set(data) - allowed
        if unknown:
            raise ValueError("unknown valuation spec keys: %s" % sorted(unknown))
        kw = {k: float(data[k]) for k in ("c0", "c0_prime", "c_n1", "c_tilde0",
                                          "c_tilde_n1") if k in data}
        zeta = ZetaSpec.from_json(data["zeta"]) if data.get("zeta") else ZetaSpec.constant(0)
        if scope == P_FULL:
            zt = data.get("zeta_tilde")
            kw["zeta_tilde"] = ZetaSpec.from_json(zt) if zt else ZetaSpec.constant(0)
        return cls(zeta=zeta, scope=scope, **kw)


def eval_representation(spec, P, x):
    """Evaluate the representation formula of ``spec`` at (P, x)."""
    if spec.scope == P_O and not P.contains_origin:
        raise DomainError("scope P_o representation evaluated on a polytope without o")
    X, single = _points(P, x)
    vals = zeta_valuation(P, spec.zeta, X)
    if spec.c_n1:
        vals = vals + spec.c_n1 * projection_function(P, X)
    const = spec.c0 * euler_characteristic(P) + spec.c0_prime * signed_relint_indicator(P)
    if spec.scope == P_FULL:
        vals = vals + zeta_hull_valuation(P, spec.zeta_tilde, X)
        if spec.c_tilde_n1:
            vals = vals + spec.c_tilde_n1 * hull_projection_function(P, X)
        const += spec.c_tilde0 * origin_indicator(P)
    return _out(vals + const, single)


def valuation_from_spec(spec):
    """The map (P, x) -> eval_representation(spec, P, x)."""
    return lambda P, x: eval_representation(spec, P, x)


def family(name, **params):
    """Named built-in valuations as (P, x) -> value callables.

    Names: zeta, zeta_hull, projection, hull_projection, euler,
    signed_relint, origin_indicator, hull_euler, volume.
    """
    zeta = params.get("zeta")
    if name == "zeta":
        return lambda P, x: zeta_valuation(P, zeta, x)
    if name == "zeta_hull":
        return lambda P, x: zeta_hull_valuation(P, zeta, x)
    if name == "projection":
        return projection_function
    if name == "hull_projection":
        return hull_projection_function
    if name == "volume":
        return lambda P, x: _constant(P.volume, P, x)
    constants = {"euler": euler_characteristic, "signed_relint": signed_relint_indicator,
                 "origin_indicator": origin_indicator,
                 "hull_euler": hull_euler_characteristic}
    if name in constants:
        f = constants[name]
        return lambda P, x: _constant(f(P), P, x)
    raise ValueError("unknown valuation family %r" % name)


def simplex_volume(n):
    return 1.0 / factorial(n)
