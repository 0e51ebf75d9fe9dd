from math import factorial

import numpy as np
import pytest

from slval.polytope import Polytope, apply_linear, random_flat_polytope, random_polytope, \
    random_unimodular, scale
from slval.simplices import axis_point, standard_simplex
from slval.valuations import (DomainError, ValuationSpec, euler_characteristic,
                              eval_representation, half_segment_support, hull_projection_function,
                              indicator_terms, lp_mixed_volume, lp_projection, lp_sum_support,
                              orlicz_mixed_volume, orlicz_projection_support,
                              projection_function, segment_support, signed_relint_indicator,
                              zeta_hull_valuation, zeta_valuation)
from slval.zeta import ZetaSpec

T3 = standard_simplex(3, 3)
CUBE = Polytope([[a, b, c] for a in (0, 1) for b in (0, 1) for c in (0, 1)])
BOX = Polytope([[a, b, c] for a in (-1, 1) for b in (-1, 1) for c in (-1, 1)])
ZETAS = [ZetaSpec.constant(2), ZetaSpec.power_plus(0.5), ZetaSpec.poly(0, 0, 1),
         ZetaSpec.table([-1, 0, 2], [3, -1, 0], (0.5, -2))]


@pytest.mark.parametrize("zeta", ZETAS, ids=lambda z: z.variant)
def test_simplex_law(zeta):
    for s in (0.5, 1, 2):
        P = standard_simplex(3, 3, s)
        for t in (-2, 0, 1):
            expect = s ** 3 / 6 * float(zeta(t / s))
            assert zeta_valuation(P, zeta, axis_point(t, 3)) == pytest.approx(expect, abs=1e-12)


def test_constant_zeta_gives_volume():
    for P in (CUBE, random_polytope(3, 3, 9), random_polytope(4, 4, 9, "general")):
        X = np.random.default_rng(0).normal(size=(5, P.n))
        assert np.allclose(zeta_valuation(P, ZetaSpec.constant(3), X), 3 * P.volume, atol=1e-12)


def test_simple_on_lower_dimensions():
    z = ZetaSpec.poly(1, -2, 3)
    X = np.random.default_rng(1).normal(size=(7, 3))
    for P in (Polytope([[0, 0, 0], [1, 0, 0]]), standard_simplex(2, 3),
              Polytope([[1, 0, 0], [0, 1, 0], [0, 0, 1]]),
              random_flat_polytope(2, 3, 2, 6, "general")):
        assert np.all(zeta_valuation(P, z, X) == 0)


def test_hull_variant():
    z = ZetaSpec.power_minus(1.5)
    x = np.array([0.3, -2.0, 1.0])
    P = random_polytope(2, 3, 8)
    assert zeta_hull_valuation(P, z, x) == zeta_valuation(P, z, x)
    face = Polytope([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert zeta_hull_valuation(face, z, x) == zeta_valuation(T3, z, x)


def test_projection_normalization():
    for n in (3, 4):
        for s in (0.5, 2):
            P = standard_simplex(n - 1, n, s)
            x = np.linspace(-1, 1, n)
            assert projection_function(P, x) == pytest.approx(
                2 * s ** (n - 1) * abs(x[-1]) / factorial(n), abs=1e-14)
    assert projection_function(CUBE, [0, 0, 1]) == pytest.approx(2 / 3)
    assert projection_function(CUBE, [0, 0, 0]) == 0


def test_lp_projection():
    rng = np.random.default_rng(2)
    for seed in range(5):
        P = random_polytope(seed, 3, 8, "general")
        x = rng.normal(size=3)
        for p in (0.5, 1, 2.5):
            sym = lp_projection(P, p, x, "sym")
            assert sym == pytest.approx(lp_projection(P, p, x, "plus")
                                        + lp_projection(P, p, x, "minus"), rel=1e-13)
    K = random_polytope(9, 3, 8, "interior")
    x = rng.normal(size=3)
    assert lp_projection(K, 1, x) == pytest.approx(projection_function(K, x), rel=1e-13)
    for p in (0.3, 1, 4):
        assert lp_projection(T3, p, [0, 0, 1], "plus") == pytest.approx(1 / 6, abs=1e-15)
    assert lp_projection(T3, 0, [0, 0, 1]) == pytest.approx(1 / 6)
    with pytest.raises(ValueError):
        lp_projection(T3, 0, [0, 0, 1], "plus")


def test_lp_mixed_volume():
    K = random_polytope(11, 3, 10, "interior")
    for p in (1, 2, 5):
        assert lp_mixed_volume(K, K, p) == pytest.approx(K.volume, rel=1e-12)
    x = np.array([0.2, 1.0, -0.4])
    assert lp_mixed_volume(K, segment_support(x), 1) == pytest.approx(
        projection_function(K, x), rel=1e-13)
    L1, L2 = random_polytope(12, 3, 8), random_polytope(13, 3, 8)
    for p in (1.5, 3):
        total = lp_mixed_volume(K, lp_sum_support(L1, L2, p), p)
        assert total == pytest.approx(lp_mixed_volume(K, L1, p) + lp_mixed_volume(K, L2, p),
                                      rel=1e-12)
    with pytest.raises(DomainError):
        lp_mixed_volume(T3, K, 2)
    assert lp_mixed_volume(T3, half_segment_support([0, 0, 1]), 2, restricted=True) == \
        pytest.approx(1 / 6)


def test_orlicz_mixed_volume():
    phi = ZetaSpec.poly(0, 0, 1)
    L = Polytope([[0, 0, -1], [0, 0, 1]])
    assert orlicz_mixed_volume(BOX, L, phi) == pytest.approx(8 / 3)
    K = random_polytope(5, 3, 9, "interior")
    assert orlicz_mixed_volume(K, K, phi) == pytest.approx(K.volume)
    L = random_polytope(6, 3, 9)
    assert orlicz_mixed_volume(K, L, ZetaSpec.abs_power(3)) == pytest.approx(
        lp_mixed_volume(K, L, 3), rel=1e-12)
    with pytest.raises(DomainError):
        orlicz_mixed_volume(T3, L, phi)


def test_orlicz_projection_support():
    K = random_polytope(8, 3, 9, "interior")
    rng = np.random.default_rng(0)
    for _ in range(5):
        x = rng.normal(size=3)
        h = orlicz_projection_support(K, ZetaSpec.abs_power(1), x)
        assert h * K.volume == pytest.approx(projection_function(K, x), abs=1e-9)
    z = ZetaSpec.poly(0, 0, 1)
    x = rng.normal(size=3)
    assert orlicz_projection_support(K, z, 3 * x) == pytest.approx(
        3 * orlicz_projection_support(K, z, x), rel=1e-11)
    M = random_unimodular(1, 3, 3)
    lhs = orlicz_projection_support(apply_linear(K, M), z, x)
    rhs = orlicz_projection_support(K, z, M.inverse.as_array() @ x)
    assert lhs == pytest.approx(rhs, rel=1e-11)
    assert orlicz_projection_support(K, z, [0, 0, 0]) == 0
    with pytest.raises(DomainError):
        orlicz_projection_support(K, ZetaSpec.abs_power(0.5), x)


def test_indicator_terms():
    origin = Polytope([[0, 0, 0]])
    assert euler_characteristic(origin) == 1 and signed_relint_indicator(origin) == 1
    assert indicator_terms(T3) == (0.0, 1.0, 1.0)
    assert indicator_terms(Polytope([[1, 0, 0], [0, 1, 0]]))[1] == 0
    seg = Polytope([[-1, 0, 0], [1, 0, 0]])
    assert signed_relint_indicator(seg) == -1
    assert euler_characteristic(Polytope.empty(3)) == 0


def test_representation():
    z = ZetaSpec.poly(1, 2, 0.5)
    P = random_polytope(1, 3, 8)
    x = np.array([0.5, -1, 2])
    assert eval_representation(ValuationSpec(zeta=z), P, x) == zeta_valuation(P, z, x)
    spec = ValuationSpec(c0=1, c0_prime=-0.5)
    assert eval_representation(spec, Polytope([[0, 0, 0]]), x) == 0.5
    with pytest.raises(DomainError):
        eval_representation(spec, Polytope([[1, 0, 0]]), x)
    full = ValuationSpec(zeta=z, scope="P_full", c_tilde0=2, c_tilde_n1=1,
                         zeta_tilde=ZetaSpec.constant(1))
    off = Polytope([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert eval_representation(full, off, x) == pytest.approx(
        1 / 6 + hull_projection_function(off, x))


def test_spec_json():
    spec = ValuationSpec(zeta=ZetaSpec.power_plus(0.5), c0=1, scope="P_full", c_tilde0=3)
    assert ValuationSpec.from_json(spec.to_json()) == spec
    with pytest.raises(ValueError):
        ValuationSpec(c_tilde0=1.0)
    with pytest.raises(ValueError):
        ValuationSpec.from_json({"scope": "P_o", "c_tilde0": 1})


def test_homogeneity():
    P = random_polytope(2, 3, 9, "general")
    x = np.array([1.0, 0.5, -0.3])
    for p in (0.5, 1, 2):
        z = ZetaSpec.power_plus(p)
        assert zeta_valuation(P, z, 2 * x) == pytest.approx(2 ** p * zeta_valuation(P, z, x))
        z = ZetaSpec.abs_power(p)
        assert zeta_valuation(scale(P, 3), z, x) == pytest.approx(
            3 ** (3 - p) * zeta_valuation(P, z, x), rel=1e-12)


def test_convex_zeta_gives_convex_function():
    # cone-volume weights are nonnegative only when o lies in P
    P = random_polytope(3, 3, 8, "contains_origin")
    z = ZetaSpec.poly(0, 1, 1)
    rng = np.random.default_rng(4)
    for _ in range(20):
        a, b = rng.normal(size=(2, 3))
        mid = zeta_valuation(P, z, (a + b) / 2)
        assert mid <= (zeta_valuation(P, z, a) + zeta_valuation(P, z, b)) / 2 + 1e-12
