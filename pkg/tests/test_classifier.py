import numpy as np
import pytest

from slval.classifier import (BlackBoxValuation, NotClassifiable, certify, fit,
                              fit_and_certify, fit_constants, fit_general, fit_zeta,
                              oracle_from_json)
from slval.polytope import random_flat_polytope
from slval.valuations import ValuationSpec, family
from slval.zeta import ZetaSpec

GRID = np.linspace(-5, 5, 41)


def oracle(spec):
    return BlackBoxValuation.from_spec(spec)


def test_constants_round_trip():
    z = ZetaSpec.sample(lambda t: t ** 2 / (1 + t ** 2), np.linspace(-10, 10, 201))
    spec = ValuationSpec(zeta=z, c0=1, c0_prime=-0.5, c_n1=2)
    c = fit_constants(oracle(spec), 3)
    assert (c.c0, c.c0_prime, c.c_n1) == pytest.approx((1, -0.5, 2), abs=1e-9)


def test_trivial_families():
    c = fit_constants(BlackBoxValuation(family("euler")), 3)
    assert (c.c0, c.c0_prime, c.c_n1) == pytest.approx((1, 0, 0), abs=1e-12)
    c = fit_constants(BlackBoxValuation(family("projection")), 4)
    assert (c.c0, c.c0_prime, c.c_n1) == pytest.approx((0, 0, 1), abs=1e-12)


def test_zeta_round_trip_power_plus():
    spec = ValuationSpec(zeta=ZetaSpec.power_plus(0.5))
    Z = oracle(spec)
    zf = fit_zeta(Z, 3, fit_constants(Z, 3), GRID)
    assert np.max(np.abs(np.array(zf.table.values) - spec.zeta(GRID))) <= 1e-8
    assert max(zf.defects.values()) <= 1e-8


def test_volume_oracle_gives_constant_zeta():
    Z = BlackBoxValuation(family("volume"))
    zf = fit_zeta(Z, 3, fit_constants(Z, 3), GRID)
    assert np.allclose(zf.table.values, 1.0, atol=1e-12)


def test_general_fit():
    spec = ValuationSpec(zeta=ZetaSpec.poly(0.2, -1, 0.3), scope="P_full", c0=0.5,
                         c0_prime=1, c_n1=-1, c_tilde0=2, c_tilde_n1=0.75,
                         zeta_tilde=ZetaSpec.table([-1, 0, 2], [1, 0, 3], (0, 1)))
    rep = fit_general(oracle(spec), 3, GRID)
    got = rep.spec
    for k in ("c0", "c0_prime", "c_n1", "c_tilde0", "c_tilde_n1"):
        assert getattr(got, k) == pytest.approx(getattr(spec, k), abs=1e-9)
    assert np.allclose(got.zeta.values, spec.zeta(GRID), atol=1e-7)
    assert np.allclose(got.zeta_tilde.values, spec.zeta_tilde(GRID), atol=1e-7)


def test_general_trivial_families():
    rep = fit_general(BlackBoxValuation(family("origin_indicator"), "P_full"), 3, GRID)
    s = rep.spec
    assert s.c_tilde0 == pytest.approx(1) and abs(s.c0) + abs(s.c0_prime) < 1e-12
    rep = fit_general(BlackBoxValuation(family("hull_projection"), "P_full"), 3, GRID)
    assert rep.spec.c_tilde_n1 == pytest.approx(1) and abs(rep.spec.c_n1) < 1e-12
    assert np.allclose(rep.spec.zeta.values, 0, atol=1e-12)


def test_certify_passes_and_table_mode():
    z = ZetaSpec.table([-2, 0, 1, 3], [1, 0, 2, 2], (-0.5, 0))
    spec = ValuationSpec(zeta=z, c0=0.5)
    Z = oracle(spec)
    rep = fit_and_certify(Z, 3, np.linspace(-2, 3, 11), corpus_size=30, use_table=False)
    assert rep.certified and rep.residual_max <= 1e-7
    # knots on the grid and end slopes matching the outer chords: the table is exact
    pure = oracle(ValuationSpec(zeta=z))
    rep = fit(pure, 3, np.linspace(-2, 3, 11))
    assert certify(pure, rep.spec, 3, corpus_size=30).residual_max <= 1e-10


def test_corrupted_oracle_fails():
    data = {"domain": "P_o", "terms": [
        {"family": "zeta", "zeta": {"variant": "abs_power", "p": 0.5}},
        {"family": "vertex_count_gt", "k": 6, "coef": 1}]}
    rep = fit_and_certify(oracle_from_json(data), 3, GRID, corpus_size=40)
    assert not rep.certified and rep.witness is not None


def test_non_valuation_is_flagged():
    Z = BlackBoxValuation(lambda P, X: np.full(len(X), len(P.vertices)))
    with pytest.raises(NotClassifiable) as info:
        fit(Z, 3)
    assert info.value.diagnostic in info.value.defects


def test_lower_dimensional_structure():
    spec = ValuationSpec(zeta=ZetaSpec.poly(1, 1), c0=1, c0_prime=2, c_n1=3)
    Z = oracle(spec)
    X = np.random.default_rng(0).normal(size=(10, 4))
    for seed in range(5):
        P = random_flat_polytope(seed, 4, 2, 5)
        assert np.allclose(Z(P, X), Z(P, np.zeros(4)), atol=1e-12)


def test_fit_report_json_is_deterministic():
    spec = ValuationSpec(zeta=ZetaSpec.constant(1), c_n1=1)
    a = fit_and_certify(oracle(spec), 3, GRID, corpus_size=10).dumps()
    b = fit_and_certify(oracle(spec), 3, GRID, corpus_size=10).dumps()
    assert a == b


def test_non_vectorized_oracle():
    from slval.valuations import projection_function
    Z = BlackBoxValuation(projection_function, vectorized=False)
    assert fit_constants(Z, 3).c_n1 == pytest.approx(1)


def test_oracle_json_rejects_unknown_keys():
    with pytest.raises(ValueError):
        oracle_from_json({"terms": [{"family": "euler", "bogus": 1}]})
    with pytest.raises(ValueError):
        oracle_from_json({"terms": [], "x": 1})
