"""Recover the classification data of a black-box valuation and certify it.

The recovery evaluates the oracle only on canonical simplices: ``T^d``,
``{o}``, ``[o, e_1]`` and, for the general scope, the shifted simplices
``[e_1, ..., e_d]``.  Certification then compares oracle and representation
on random polytopes that are never simplices of this kind.
"""

import json
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial

import numpy as np

from slval.polytope import Polytope, random_flat_polytope, random_polytope
from slval.simplices import axis_point, shifted_simplex, standard_simplex
from slval.valuations import (P_FULL, P_O, SCOPES, ValuationSpec, eval_representation,
                              family)
from slval.zeta import ZetaSpec

DEFAULT_GRID = (-10.0, 10.0, 201)
FIT_TOL = 1e-8
CERTIFY_TOL = 1e-7


class NotClassifiable(Exception):
    """The oracle violates an identity every valuation of the stated class obeys."""

    def __init__(self, diagnostic, defects):
        super().__init__("%s (defect %.3e)" % (diagnostic, defects.get(diagnostic, float("nan"))))
        self.diagnostic = diagnostic
        self.defects = dict(defects)


class BlackBoxValuation:
    """An oracle (P, x) -> real on polytopes of the declared domain.

    ``func`` receives a Polytope and an ``(m, n)`` array of points when
    ``vectorized`` is true, otherwise a single point per call.
    """

    def __init__(self, func, domain=P_O, vectorized=True, name=None):
        if domain not in SCOPES:
            raise ValueError("domain must be P_o or P_full")
        self.func = func
        self.domain = domain
        self.vectorized = vectorized
        self.name = name or getattr(func, "__name__", "oracle")

    def __call__(self, P, x):
        X = np.asarray(x, dtype=float)
        single = X.ndim == 1
        X = np.atleast_2d(X)
        if self.vectorized:
            vals = np.asarray(self.func(P, X), dtype=float).reshape(len(X))
        else:
            vals = np.array([float(self.func(P, xi)) for xi in X])
        return float(vals[0]) if single else vals

    @classmethod
    def from_spec(cls, spec):
        return cls(lambda P, X: eval_representation(spec, P, X), domain=spec.scope,
                   name="representation")


def _defect(lhs, rhs):
    lhs, rhs = np.asarray(lhs, dtype=float), np.asarray(rhs, dtype=float)
    scale = 1.0 + np.maximum(np.abs(lhs), np.abs(rhs))
    return float(np.max(np.abs(lhs - rhs) / scale)) if lhs.size else 0.0


def _sample_points(rng, count, n, radius=2.0):
    return rng.uniform(-radius, radius, size=(count, n))


# --------------------------------------------------------------------------
# constants

@dataclass
class ConstantsFit:
    c0: float
    c0_prime: float
    c_n1: float
    defects: dict = field(default_factory=dict)

    def to_json(self):
        return {"c0": self.c0, "c0_prime": self.c0_prime, "c_n1": self.c_n1,
                "defects": dict(sorted(self.defects.items()))}


def _simplex_constants(Z, n, simplex, rng, s_grid, prefix):
    """(v0, v_n1, defects) for the family s -> simplex(d, n, s)."""
    base = simplex(1, n)
    v0 = Z(base, np.zeros(n))
    top = Z(simplex(n - 1, n), axis_point(1.0, n))
    v_n1 = factorial(n) / 2 * (top - v0)
    defects = {}

    # least squares of Z(s T^{n-1})(t e_n) - v0 against 2 s^{n-1} |t| / n!
    ts = np.array([-2.0, -1.0, -0.5, 0.5, 1.0, 3.0])
    rows, rhs = [], []
    for s in s_grid:
        vals = Z(simplex(n - 1, n, s), np.outer(ts, np.eye(n)[-1])) - v0
        rows.extend(2 * s ** (n - 1) * np.abs(ts) / factorial(n))
        rhs.extend(vals)
    rows, rhs = np.array(rows), np.array(rhs)
    c_ls = float(rows @ rhs / (rows @ rows))
    defects[prefix + "projection_scaling"] = _defect(rhs, c_ls * rows)
    defects[prefix + "projection_lsq_vs_direct"] = _defect(c_ls, v_n1)

    # additivity f(t) = f(lam t) + f((1-lam) t) along e_n on T^{n-1}
    Tn1 = simplex(n - 1, n)
    tt = np.array([-3.0, -1.0, 1.0, 2.5])
    lam = 0.3
    f = lambda t: Z(Tn1, np.outer(t, np.eye(n)[-1])) - v0
    defects[prefix + "cauchy_n-1"] = _defect(f(tt), f(lam * tt) + f((1 - lam) * tt))

    # lower-dimensional structure: constant in x below n-1, depends on x_n only at n-1
    worst_const, worst_axis, worst_chain = 0.0, 0.0, 0.0
    X = _sample_points(rng, 8, n)
    for s in s_grid:
        for d in range(1, n - 1):
            P = simplex(d, n, s)
            vals = Z(P, X)
            at_o = Z(P, np.zeros(n))
            worst_const = max(worst_const, _defect(vals, np.full(len(X), at_o)))
            worst_chain = max(worst_chain, _defect(at_o, v0))
        P = simplex(n - 1, n, s)
        Xn = np.zeros_like(X)
        Xn[:, -1] = X[:, -1]
        worst_axis = max(worst_axis, _defect(Z(P, X), Z(P, Xn)))
    defects[prefix + "lowdim_constant"] = worst_const
    defects[prefix + "lowdim_chain"] = worst_chain
    defects[prefix + "lowdim_axis"] = worst_axis
    return v0, v_n1, defects


def fit_constants(Z, n, s_grid=(0.5, 1.0, 2.0), seed=0, tol=FIT_TOL, strict=True):
    """c0 = Z[o,e_1](o), c0' = Z{o}(o) - c0, c_{n-1} = (n!/2)(Z T^{n-1}(e_n) - c0)."""
    rng = np.random.default_rng(seed)
    origin = Polytope([(0,) * n], n=n)
    c0, c_n1, defects = _simplex_constants(Z, n, standard_simplex, rng, s_grid, "")
    c0_prime = Z(origin, np.zeros(n)) - c0
    defects["point_constant"] = _defect(Z(origin, _sample_points(rng, 8, n)),
                                        np.full(8, c0 + c0_prime))
    fit = ConstantsFit(c0=c0, c0_prime=c0_prime, c_n1=c_n1, defects=defects)
    if strict:
        _raise_if_bad(defects, tol)
    return fit


def _raise_if_bad(defects, tol):
    bad = [k for k, v in sorted(defects.items()) if not v <= tol]
    if bad:
        worst = max(bad, key=lambda k: defects[k])
        raise NotClassifiable(worst, defects)


# --------------------------------------------------------------------------
# generating functions

class OracleZeta:
    """zeta(t) = n! (Z(S^n)(t e_n) - v0) - 2 v_n1 |t|, queried on demand.

    ``S^d`` is T^d, or the shifted simplex for the hull part.  ``minus`` is
    another OracleZeta subtracted pointwise together with ``slope`` |t|,
    which realises the recombination for the general scope.
    """

    def __init__(self, Z, n, v0, v_n1, shifted=False, minus=None, slope=0.0):
        self.Z, self.n, self.v0, self.v_n1 = Z, n, v0, v_n1
        self.shifted = shifted
        self.minus = minus
        self.slope = slope
        self._S = (shifted_simplex if shifted else standard_simplex)(n, n)

    def raw(self, t):
        t = np.asarray(t, dtype=float)
        flat = t.reshape(-1)
        if flat.size == 0:
            return np.zeros(t.shape)
        X = np.zeros((flat.size, self.n))
        X[:, -1] = flat
        vals = factorial(self.n) * (self.Z(self._S, X) - self.v0) - 2 * self.v_n1 * np.abs(flat)
        return vals.reshape(t.shape)

    def __call__(self, t):
        vals = self.raw(t)
        if self.minus is not None:
            vals = vals - self.minus.raw(t)
        if self.slope:
            vals = vals + self.slope * np.abs(np.asarray(t, dtype=float))
        return vals

    def tabulate(self, grid):
        return ZetaSpec.sample(self, grid)

    def to_json(self):
        return None


@dataclass
class ZetaFit:
    table: ZetaSpec
    oracle: OracleZeta
    defects: dict = field(default_factory=dict)


def _grid(t_grid):
    if t_grid is None:
        t_grid = DEFAULT_GRID
    if isinstance(t_grid, tuple) and len(t_grid) == 3 and isinstance(t_grid[2], int):
        return np.linspace(*t_grid)
    return np.asarray(t_grid, dtype=float)


def _zeta_defects(Z, n, v0, v_n1, shifted, grid, rng, prefix):
    simplex = shifted_simplex if shifted else standard_simplex
    nf = factorial(n)
    probe = grid[:: max(1, len(grid) // 25)]
    E = np.eye(n)[-1]

    def zeta_s(s):
        vals = Z(simplex(n, n, s), np.outer(s * probe, E)) - v0
        return nf * vals / s ** n - 2 * v_n1 * np.abs(probe)

    base = zeta_s(1.0)
    defects = {prefix + "scaling_s=1/2": _defect(zeta_s(0.5), base),
               prefix + "scaling_s=2": _defect(zeta_s(2.0), base)}

    def f(t, r):
        s = r ** (1.0 / n)
        return Z(simplex(n, n, s), np.outer(s * t, E)) - v0

    worst = 0.0
    for _ in range(3):
        r1, r2 = rng.uniform(0.2, 2.0, size=2)
        worst = max(worst, _defect(f(probe, r1 + r2), f(probe, r1) + f(probe, r2)))
    defects[prefix + "cauchy_n"] = worst
    return defects


def fit_zeta(Z, n, constants, t_grid=None, seed=0, tol=FIT_TOL, strict=True):
    """Recover zeta pointwise: zeta(t) = n!(Z T^n(t e_n) - c0) - 2 c_{n-1} |t|."""
    grid = _grid(t_grid)
    rng = np.random.default_rng(seed + 1)
    oracle = OracleZeta(Z, n, constants.c0, constants.c_n1)
    defects = _zeta_defects(Z, n, constants.c0, constants.c_n1, False, grid, rng, "zeta_")
    if strict:
        _raise_if_bad(defects, tol)
    return ZetaFit(table=oracle.tabulate(grid), oracle=oracle, defects=defects)


# --------------------------------------------------------------------------
# full fits

@dataclass
class FitReport:
    spec: ValuationSpec
    n: int
    grid: tuple
    defects: dict
    oracle_spec: ValuationSpec = None
    certified: bool = None
    residual_max: float = None
    residual_mean: float = None
    residual_table: list = field(default_factory=list)
    corpus_seed: int = None
    corpus_size: int = 0
    x_samples: int = 0
    tolerance: float = CERTIFY_TOL
    witness: dict = None
    notes: str = ("certification covers only the identities and samples listed; "
                  "measurability of the oracle is assumed, not tested")

    def to_json(self):
        return {
            "n": self.n,
            "spec": self.spec.to_json(),
            "grid": ({"lo": self.grid[0], "hi": self.grid[-1], "count": len(self.grid)}
                     if len(self.grid) else None),
            "defects": dict(sorted(self.defects.items())),
            "certified": self.certified,
            "residual": {"max": self.residual_max, "mean": self.residual_mean,
                         "tolerance": self.tolerance, "corpus_seed": self.corpus_seed,
                         "corpus_size": self.corpus_size, "x_samples": self.x_samples,
                         "per_polytope": self.residual_table},
            "witness": self.witness,
            "notes": self.notes,
        }

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


def fit_p_o(Z, n, t_grid=None, seed=0, tol=FIT_TOL, strict=True):
    """fit_constants followed by fit_zeta; returns a FitReport (scope P_o)."""
    grid = _grid(t_grid)
    consts = fit_constants(Z, n, seed=seed, tol=tol, strict=strict)
    zfit = fit_zeta(Z, n, consts, grid, seed=seed, tol=tol, strict=strict)
    spec = ValuationSpec(zeta=zfit.table, c0=consts.c0, c0_prime=consts.c0_prime,
                         c_n1=consts.c_n1)
    oracle_spec = ValuationSpec(zeta=zfit.oracle, c0=consts.c0, c0_prime=consts.c0_prime,
                                c_n1=consts.c_n1)
    defects = dict(consts.defects, **zfit.defects)
    return FitReport(spec=spec, n=n, grid=tuple(grid), defects=defects,
                     oracle_spec=oracle_spec)


def fit_general(Z, n, t_grid=None, seed=0, tol=FIT_TOL, strict=True):
    """Seven-field fit on all polytopes.

    The fit on T^d gives (a0, a0', a_{n-1}, xi); the same recipe on the
    shifted simplices [e_1..e_d] gives (b0, b_{n-1}, xi~).  Then
    zeta = xi - xi~ + 2(a-b)|t|, zeta~ = xi~ - 2(a-b)|t|, c_{n-1} = a - b,
    c~_{n-1} = b, c0 = b0, c0' = a0', c~0 = a0 - b0.
    """
    grid = _grid(t_grid)
    rng = np.random.default_rng(seed + 2)
    a = fit_constants(Z, n, seed=seed, tol=tol, strict=False)
    b0, b_n1, bdef = _simplex_constants(Z, n, shifted_simplex, rng, (0.5, 1.0, 2.0),
                                        "shifted_")
    defects = dict(a.defects, **bdef)
    defects.update(_zeta_defects(Z, n, a.c0, a.c_n1, False, grid, rng, "zeta_"))
    defects.update(_zeta_defects(Z, n, b0, b_n1, True, grid, rng, "zeta_tilde_"))
    if strict:
        _raise_if_bad(defects, tol)
    diff = a.c_n1 - b_n1
    xi = OracleZeta(Z, n, a.c0, a.c_n1)
    xi_t = OracleZeta(Z, n, b0, b_n1, shifted=True)
    zeta = OracleZeta(Z, n, a.c0, a.c_n1, minus=xi_t, slope=2 * diff)
    zeta_t = OracleZeta(Z, n, b0, b_n1, shifted=True, slope=-2 * diff)
    del xi
    consts = dict(c0=b0, c0_prime=a.c0_prime, c_n1=diff, c_tilde0=a.c0 - b0,
                  c_tilde_n1=b_n1, scope=P_FULL)
    spec = ValuationSpec(zeta=zeta.tabulate(grid), zeta_tilde=zeta_t.tabulate(grid),
                         **consts)
    oracle_spec = ValuationSpec(zeta=zeta, zeta_tilde=zeta_t, **consts)
    return FitReport(spec=spec, n=n, grid=tuple(grid), defects=defects,
                     oracle_spec=oracle_spec)


def fit(Z, n, t_grid=None, seed=0, tol=FIT_TOL, strict=True):
    """Dispatch on the oracle's declared domain."""
    domain = getattr(Z, "domain", P_O)
    if domain == P_FULL:
        return fit_general(Z, n, t_grid, seed=seed, tol=tol, strict=strict)
    return fit_p_o(Z, n, t_grid, seed=seed, tol=tol, strict=strict)


# --------------------------------------------------------------------------
# certification

@lru_cache(maxsize=16)
def certification_corpus(seed, size, n, scope):
    """Random polytopes (mostly full-dimensional, some flat) for certification."""
    rng = np.random.default_rng(seed)
    corpus = []
    for i in range(size):
        sub = int(rng.integers(0, 2 ** 31))
        kind = rng.random()
        if kind < 0.1:
            d = int(rng.integers(1, n))
            mode = "contains_origin" if scope == P_O else str(rng.choice(["contains_origin", "general"]))
            corpus.append(random_flat_polytope(sub, n, d, d + 2, mode))
        else:
            mode = "contains_origin" if scope == P_O else ("general" if kind < 0.6 else "contains_origin")
            corpus.append(random_polytope(sub, n, int(rng.integers(n + 2, n + 9)), mode))
    return tuple(corpus)


def certify(Z, spec, n=None, corpus_seed=12345, corpus_size=100, x_samples=20,
            tol=CERTIFY_TOL, report=None):
    """Compare Z with the representation of ``spec`` on a fresh random corpus.

    The residual is |Z - R| / (1 + max(|Z|, |R|)).  Returns a FitReport
    (updating ``report`` when given).
    """
    n = n or (report.n if report else None)
    if n is None:
        raise ValueError("ambient dimension required")
    corpus = certification_corpus(corpus_seed, corpus_size, n, spec.scope)
    rng = np.random.default_rng(corpus_seed + 7)
    worst, total, count, table, witness = 0.0, 0.0, 0, [], None
    for idx, P in enumerate(corpus):
        X = _sample_points(rng, x_samples, n)
        z = Z(P, X)
        r = eval_representation(spec, P, X)
        res = np.abs(z - r) / (1.0 + np.maximum(np.abs(z), np.abs(r)))
        m = float(res.max())
        table.append(m)
        total += float(res.sum())
        count += len(res)
        if m > worst:
            worst = m
            k = int(res.argmax())
            witness = {"index": idx, "polytope": P.to_json(), "x": [float(c) for c in X[k]],
                       "oracle": float(z[k]), "representation": float(r[k])}
    if report is None:
        report = FitReport(spec=spec, n=n, grid=(), defects={})
    report.certified = worst <= tol
    report.residual_max = worst
    report.residual_mean = total / max(count, 1)
    report.residual_table = table
    report.corpus_seed = corpus_seed
    report.corpus_size = corpus_size
    report.x_samples = x_samples
    report.tolerance = tol
    report.witness = None if report.certified else witness
    return report


def fit_and_certify(Z, n, t_grid=None, seed=0, corpus_seed=12345, corpus_size=100,
                    x_samples=20, fit_tol=FIT_TOL, tol=CERTIFY_TOL, use_table=False):
    """Fit and then certify; the oracle-backed spec is used unless ``use_table``."""
    rep = fit(Z, n, t_grid, seed=seed, tol=fit_tol)
    spec = rep.spec if use_table else rep.oracle_spec
    return certify(Z, spec, n, corpus_seed, corpus_size, x_samples, tol, report=rep)


# --------------------------------------------------------------------------
# oracle composition trees (JSON)

_TERM_KEYS = {"family", "coef", "zeta", "spec", "k"}


def _term_func(term):
    unknown = set(term) - _TERM_KEYS
    if unknown:
        raise ValueError("unknown oracle term keys: %s" % sorted(unknown))
    name = term["family"]
    if name in ("zeta", "zeta_hull"):
        return family(name, zeta=ZetaSpec.from_json(term["zeta"]))
    if name == "representation":
        spec = ValuationSpec.from_json(term["spec"])
        return lambda P, X: eval_representation(spec, P, X)
    if name == "vertex_count_gt":
        k = int(term["k"])
        return lambda P, X: np.full(len(np.atleast_2d(X)), float(len(P.vertices) > k))
    if name == "diameter":
        return lambda P, X: np.full(len(np.atleast_2d(X)), P.diameter)
    return family(name)


def oracle_from_json(data):
    """Build a BlackBoxValuation from {"domain": ..., "terms": [...]}.

    Each term is {"family": name, "coef": c, ...}; ``zeta`` and ``zeta_hull``
    take a "zeta" object, ``representation`` a "spec" object and
    ``vertex_count_gt`` an integer "k".
    """
    if isinstance(data, str):
        data = json.loads(data)
    unknown = set(data) - {"domain", "terms", "n"}
    if unknown:
        raise ValueError("unknown oracle keys: %s" % sorted(unknown))
    domain = data.get("domain", P_O)
    terms = [(float(t.get("coef", 1.0)), _term_func(t)) for t in data["terms"]]
    if not terms:
        raise ValueError("oracle needs at least one term")

    def func(P, X):
        X = np.atleast_2d(X)
        out = np.zeros(len(X))
        for c, f in terms:
            out = out + c * np.asarray(f(P, X), dtype=float).reshape(len(X))
        return out

    return BlackBoxValuation(func, domain=domain, name="composition")
