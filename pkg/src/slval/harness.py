"""Seeded property checks: valuation identity, contravariance, dissections,
the L_p Minkowski inequality, translation behaviour and the continuity witness.

Every check returns a PropertyReport whose JSON form is byte-stable for a
given seed.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from slval.polytope import (Polytope, apply_linear, clip, random_cutting_halfspace,
                            random_polytope, random_unimodular, slice_hyperplane,
                            translate)
from slval.simplices import (axis_point, dissection_halfspace, hat_simplex, phi1, phi2,
                             psi3, psi4, standard_simplex)
from slval.valuations import (P_FULL, P_O, lp_mixed_volume, projection_function,
                              zeta_valuation)
from slval.zeta import ZetaSpec

VALUATION_TOL = 1e-8
DISSECTION_TOL = 1e-10
MINKOWSKI_TOL = 1e-12


@dataclass
class PropertyReport:
    name: str
    trials: int
    max_defect: float
    tolerance: float
    passed: bool
    seed: int = None
    witness: dict = None
    details: dict = field(default_factory=dict)

    def to_json(self):
        return {"name": self.name, "trials": self.trials, "max_defect": self.max_defect,
                "tolerance": self.tolerance, "passed": self.passed, "seed": self.seed,
                "witness": self.witness, "details": self.details}

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


def _normalized(terms, signs):
    terms = [np.asarray(t, dtype=float) for t in terms]
    total = sum(s * t for s, t in zip(signs, terms))
    scale = 1.0 + np.max(np.abs(np.stack(terms)), axis=0)
    return np.abs(total) / scale


def _report(name, defects, tol, seed, witness_fn, details=None):
    defects = np.asarray(defects, dtype=float)
    worst = float(defects.max()) if defects.size else 0.0
    passed = bool(worst <= tol)
    witness = None
    if not passed:
        witness = witness_fn(int(defects.argmax()))
    return PropertyReport(name=name, trials=int(defects.size), max_defect=worst,
                          tolerance=tol, passed=passed, seed=seed, witness=witness,
                          details=details or {})


def _call(Z, P, X):
    return np.asarray(Z(P, X), dtype=float).reshape(len(X))


# --------------------------------------------------------------------------
# valuation identity

@lru_cache(maxsize=8)
def cut_corpus(seed, trials, n, scope, x_samples=20):
    """(P, P cap H, P cap H^c, P cap bd H, X) per trial.

    For scope P_o the polytopes contain o and the hyperplanes pass through o,
    so all four pieces stay in the domain.
    """
    rng = np.random.default_rng(seed)
    out = []
    for i in range(trials):
        sub = int(rng.integers(0, 2 ** 31))
        k = int(rng.integers(n + 2, n + 8))
        if scope == P_O:
            P = random_polytope(sub, n, k, "contains_origin")
            through = True
        else:
            P = random_polytope(sub, n, k, "general" if i % 2 else "contains_origin")
            through = bool(i % 4 == 3)
        H = random_cutting_halfspace(rng, P, through_origin=through)
        X = rng.uniform(-2.0, 2.0, size=(x_samples, n))
        out.append((P, clip(P, H), clip(P, H.complement()), slice_hyperplane(P, H), H, X))
    return tuple(out)


def check_valuation(Z, seed=0, trials=200, n=3, scope=P_FULL, tol=VALUATION_TOL,
                    x_samples=20, name="valuation"):
    """max over trials of |Z(P cap H+) + Z(P cap H-) - Z(P) - Z(P cap bd H)|, normalized."""
    corpus = cut_corpus(seed, trials, n, scope, x_samples)
    defects = []
    for P, A, B, C, H, X in corpus:
        terms = [_call(Z, A, X), _call(Z, B, X), _call(Z, P, X), _call(Z, C, X)]
        defects.append(float(_normalized(terms, (1, 1, -1, -1)).max()))

    def witness(i):
        P, _, _, _, H, X = corpus[i]
        return {"trial": i, "polytope": P.to_json(), "halfspace": H.to_json(),
                "x": X.tolist()}

    return _report(name, defects, tol, seed, witness, {"scope": scope, "n": n})


def check_contravariance(Z, seed=0, trials=100, n=3, scope=P_FULL, tol=VALUATION_TOL,
                         x_samples=20, shear_count=3, name="contravariance"):
    """|Z(MP)(x) - Z(P)(M^{-1} x)| for random integer unimodular M."""
    rng = np.random.default_rng(seed)
    records = []
    defects = []
    for i in range(trials):
        sub = int(rng.integers(0, 2 ** 31))
        mode = "contains_origin" if scope == P_O or i % 2 == 0 else "general"
        P = random_polytope(sub, n, int(rng.integers(n + 2, n + 8)), mode)
        M = random_unimodular(sub + 1, n, shear_count)
        X = rng.uniform(-2.0, 2.0, size=(x_samples, n))
        Y = X @ M.inverse.as_array().T
        lhs = _call(Z, apply_linear(P, M), X)
        rhs = _call(Z, P, Y)
        defects.append(float(_normalized([lhs, rhs], (1, -1)).max()))
        records.append((P, M, X))

    def witness(i):
        P, M, X = records[i]
        return {"trial": i, "polytope": P.to_json(),
                "matrix": [[str(c) for c in r] for r in M.matrix], "x": X.tolist()}

    return _report(name, defects, tol, seed, witness, {"scope": scope, "n": n})


# --------------------------------------------------------------------------
# dissections

def _vertex_identities(n, lambdas, s):
    results = {}
    for lam in lambdas:
        for d in sorted({2, n - 1, n}):
            T = standard_simplex(d, n, s)
            lower = clip(T, dissection_halfspace(lam, n, "-"))
            upper = clip(T, dissection_halfspace(lam, n, "+"))
            wall = slice_hyperplane(T, dissection_halfspace(lam, n))
            m1, m2 = (phi1(lam, n), phi2(lam, n)) if d < n else (psi3(lam, n), psi4(lam, n))
            key = "lam=%s,d=%d" % (lam, d)
            results[key] = (lower == apply_linear(T, m1) and upper == apply_linear(T, m2)
                            and wall == apply_linear(hat_simplex(d, n, s), m1))
    # lam -> 0: H_0 has normal e_1 and cuts T^d in the face x_1 = 0
    for d in sorted({2, n - 1, n}):
        T = standard_simplex(d, n, s)
        face = clip(T, dissection_halfspace(0, n, "-"))
        expected = Polytope([(0,) * n] + [tuple(Fraction(s) if j == i else 0 for j in range(n))
                                          for i in range(1, d)], n=n)
        results["lam=0,d=%d" % d] = face == expected and face.dim == d - 1
    return results


def check_simplex_dissections(seed=0, n=3, zeta=None, Z=None, s=1,
                              lambdas=(Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)),
                              tol=DISSECTION_TOL):
    """Exact vertex-set identities of the dissection maps plus three numeric
    functional equations.

    ``lower`` (d < n pieces) is checked for ``Z`` (default Z_zeta); ``facet``
    (Cauchy equation on T^{n-1}) for the projection function and for ``Z``
    minus its value on [o, e_1]; ``full`` (Cauchy equation on scaled T^n) for
    the simple valuation Z_zeta.
    """
    rng = np.random.default_rng(seed)
    zeta = zeta or ZetaSpec.poly(0.5, -1.0, 0.25, 0.1)
    Zz = lambda P, X: zeta_valuation(P, zeta, X)
    Z = Z or Zz
    s = Fraction(s)
    exact = _vertex_identities(n, lambdas, s)
    ts = rng.uniform(-3.0, 3.0, size=8)
    E = np.eye(n)[-1]
    Xs = lambda t: np.outer(t, E)
    defects = {}
    for lam in lambdas:
        lf = float(lam)
        for d in range(2, n):
            T = standard_simplex(d, n, s)
            That = hat_simplex(d, n, s)
            lhs = [_call(Z, T, Xs(ts)), _call(Z, That, Xs(lf * ts))]
            rhs = [_call(Z, T, Xs(lf * ts)), _call(Z, T, Xs((1 - lf) * ts))]
            defects["lower,lam=%s,d=%d" % (lam, d)] = float(
                _normalized(lhs + rhs, (1, 1, -1, -1)).max())
        Tn1 = standard_simplex(n - 1, n)
        base = _call(Z, standard_simplex(1, n), np.zeros((1, n)))[0]
        for label, F, off in (("V1", projection_function, 0.0), ("Z", Z, base)):
            f = lambda t: _call(F, Tn1, Xs(t)) - off
            defects["facet,%s,lam=%s" % (label, lam)] = float(
                _normalized([f(ts), f(lf * ts), f((1 - lf) * ts)], (1, -1, -1)).max())
        sf = float(s)
        a, b = lf ** (1.0 / n), (1 - lf) ** (1.0 / n)
        lhs = _call(Zz, standard_simplex(n, n, s), Xs(ts))
        r1 = _call(Zz, standard_simplex(n, n, a * sf), Xs(a * ts))
        r2 = _call(Zz, standard_simplex(n, n, b * sf), Xs(b * ts))
        defects["full,lam=%s" % lam] = float(_normalized([lhs, r1, r2], (1, -1, -1)).max())
    worst = max(defects.values())
    passed = all(exact.values()) and worst <= tol
    return PropertyReport(
        name="simplex_dissections", trials=len(exact) + len(defects), max_defect=worst,
        tolerance=tol, passed=passed, seed=seed,
        witness=None if passed else {"exact_failures": sorted(k for k, v in exact.items() if not v),
                                     "defects": {k: v for k, v in sorted(defects.items())
                                                 if v > tol}},
        details={"exact": dict(sorted(exact.items())), "defects": dict(sorted(defects.items())),
                 "n": n})


# --------------------------------------------------------------------------
# L_p Minkowski inequality

def minkowski_slack(K, L, p):
    """(V_p(K,L)/V_n(K))^{1/p} - (V_n(L)/V_n(K))^{1/n}."""
    vk = K.volume
    lhs = (lp_mixed_volume(K, L, p) / vk) ** (1.0 / p)
    return lhs - (L.volume / vk) ** (1.0 / K.n)


def check_minkowski_inequality(seed=0, trials=100, p_list=(1, 2, 3), n=3, tol=MINKOWSKI_TOL):
    """No slack below -tol on random pairs; |slack| <= tol at K = L."""
    rng = np.random.default_rng(seed)
    violations, slacks, equal = [], [], []
    pairs = []
    for _ in range(trials):
        sk, sl = (int(v) for v in rng.integers(0, 2 ** 31, size=2))
        K = random_polytope(sk, n, int(rng.integers(n + 2, n + 10)), "interior")
        L = random_polytope(sl, n, int(rng.integers(n + 2, n + 10)), "contains_origin")
        pairs.append((K, L))
        for p in p_list:
            sl_ = minkowski_slack(K, L, p)
            slacks.append(sl_)
            violations.append(max(0.0, -sl_))
            equal.append(abs(minkowski_slack(K, K, p)))
    defects = np.array(violations + equal)

    def witness(i):
        j = i if i < len(violations) else i - len(violations)
        K, L = pairs[j // len(p_list)]
        return {"K": K.to_json(), "L": L.to_json(), "p": p_list[j % len(p_list)],
                "equality_case": i >= len(violations)}

    return _report("lp_minkowski", defects, tol, seed, witness,
                   {"min_slack": float(min(slacks)), "max_slack": float(max(slacks)),
                    "max_equality_defect": float(max(equal)), "p_list": list(p_list), "n": n})


# --------------------------------------------------------------------------
# translation behaviour

def check_translation_invariance(Z, seed=0, trials=50, n=3, x_samples=20,
                                 tol=VALUATION_TOL, name="translation_invariance"):
    """Z(P + y) = Z(P) for translations that keep the origin inside P + y."""
    rng = np.random.default_rng(seed)
    defects, records = [], []
    for _ in range(trials):
        sub = int(rng.integers(0, 2 ** 31))
        P = random_polytope(sub, n, int(rng.integers(n + 2, n + 8)), "interior")
        v = P.vertices[int(rng.integers(len(P.vertices)))]
        t = Fraction(int(rng.integers(1, 16)), 16)
        y = tuple(-t * c for c in v)          # moves o toward the vertex v, stays inside
        X = rng.uniform(-2.0, 2.0, size=(x_samples, n))
        defects.append(float(_normalized([_call(Z, translate(P, y), X), _call(Z, P, X)],
                                         (1, -1)).max()))
        records.append((P, y, X))

    def witness(i):
        P, y, X = records[i]
        return {"polytope": P.to_json(), "y": [str(c) for c in y], "x": X.tolist()}

    return _report(name, defects, tol, seed, witness, {"n": n})


def box_witness(n, t, full=True):
    """sum_{i<n} [-e_i, e_i] + [-1, 1] e_n + t e_n (full) or its (n-1)-face at height t."""
    t = Fraction(t)
    pts = []
    for mask in range(2 ** (n - 1)):
        base = [Fraction(1 if mask >> i & 1 else -1) for i in range(n - 1)]
        if full:
            pts.append(tuple(base + [t - 1]))
            pts.append(tuple(base + [t + 1]))
        else:
            pts.append(tuple(base + [t]))
    return Polytope(pts, n=n)


def check_box_translation(Z, n=3, shifts=(Fraction(1, 4), Fraction(1, 2), Fraction(-3, 4)),
                          full=True, tol=VALUATION_TOL, seed=0):
    """Compare Z on the translated boxes P_t with P_0 (the witness family of the
    translation corollaries)."""
    rng = np.random.default_rng(seed)
    X = rng.uniform(-2.0, 2.0, size=(20, n))
    X[0] = axis_point(1.0, n)
    base = _call(Z, box_witness(n, 0, full), X)
    defects = [float(_normalized([_call(Z, box_witness(n, t, full), X), base], (1, -1)).max())
               for t in shifts]
    return _report("box_translation", defects, tol, seed,
                   lambda i: {"t": str(shifts[i]), "full": full},
                   {"n": n, "full": full})


# --------------------------------------------------------------------------
# continuity witness

def witness_body(n, t):
    """P_t = sum_{i<n} [-e_i, e_i] + [-(1/t) e_n, e_n]; t = None gives the limit."""
    low = Fraction(0) if t is None else -Fraction(1, t)
    pts = []
    for mask in range(2 ** (n - 1)):
        base = [Fraction(1 if mask >> i & 1 else -1) for i in range(n - 1)]
        pts.append(tuple(base + [low]))
        pts.append(tuple(base + [Fraction(1)]))
    return Polytope(pts, n=n)


def check_continuity_witness(zeta, n=3, exponents=range(1, 7), ratio=1e-2, floor=1e-12):
    """Does Z_zeta(P_t)(+-e_n) approach Z_zeta(P)(+-e_n) along the witness sequence?

    Convergence is declared when, for both signs, the defects against the
    limit are non-increasing along the sequence and the last one is at most
    ``ratio`` times the first (or all defects are below ``floor``).  This
    probes one sequence; it is not a continuity proof.
    """
    ts = [10 ** k for k in exponents]
    X = np.array([axis_point(1.0, n), axis_point(-1.0, n)])
    limit = zeta_valuation(witness_body(n, None), zeta, X)
    values = np.array([zeta_valuation(witness_body(n, t), zeta, X) for t in ts])
    defects = np.abs(values - limit)
    cauchy = np.abs(np.diff(values, axis=0))
    verdicts = []
    for j in range(2):
        d = defects[:, j]
        if np.all(d <= floor):
            verdicts.append(True)
            continue
        monotone = bool(np.all(np.diff(d) <= 1e-12 * (1 + d[:-1])))
        verdicts.append(monotone and d[-1] <= ratio * d[0])
    converged = all(verdicts)
    return PropertyReport(
        name="continuity_witness", trials=len(ts), max_defect=float(defects[-1].max()),
        tolerance=ratio, passed=converged, seed=None,
        witness=None if converged else {"t": ts, "defects": defects.tolist()},
        details={"t": ts, "values": values.tolist(), "limit": limit.tolist(),
                 "defects": defects.tolist(), "cauchy_differences": cauchy.tolist(),
                 "converges_at_plus_e_n": verdicts[0], "converges_at_minus_e_n": verdicts[1],
                 "sublinear_flag": getattr(zeta, "is_sublinear", None)})


# --------------------------------------------------------------------------
# suite

def run_suite(Z, seed=0, n=3, scope=P_FULL, trials=200, contra_trials=100):
    """Axiom checks for one valuation plus the structural checks."""
    return [
        check_valuation(Z, seed, trials, n, scope),
        check_contravariance(Z, seed, contra_trials, n, scope),
        check_simplex_dissections(seed, n),
        check_minkowski_inequality(seed, 100, (1, 2, 3), n),
    ]
