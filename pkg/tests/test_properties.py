from fractions import Fraction

import numpy as np
from hypothesis import given, settings, strategies as st

from slval.measures import cone_volume_measure, surface_area_measure
from slval.polytope import Halfspace, apply_linear, clip, random_polytope, random_unimodular, \
    slice_hyperplane
from slval.valuations import zeta_valuation
from slval.zeta import ZetaSpec

SETTINGS = settings(max_examples=30, deadline=None)
seeds = st.integers(0, 2 ** 31 - 1)
dims = st.sampled_from([3, 4])
zetas = st.one_of(
    st.builds(ZetaSpec.power_plus, st.floats(0.25, 3)),
    st.builds(ZetaSpec.abs_power, st.floats(0.25, 3)),
    st.builds(ZetaSpec.poly, st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2)),
)


@SETTINGS
@given(seeds, dims)
def test_surface_area_closes(seed, n):
    m = surface_area_measure(random_polytope(seed, n, n + 4, "general"))
    assert np.allclose(m.normals.T @ m.weights, 0, atol=1e-12)


@SETTINGS
@given(seeds, dims)
def test_cone_volume_total(seed, n):
    P = random_polytope(seed, n, n + 4, "general")
    assert abs(cone_volume_measure(P).total_mass - P.volume) <= 1e-12


@SETTINGS
@given(seeds, zetas, st.integers(-8, 8), st.integers(-8, 8))
def test_valuation_under_cuts(seed, zeta, a, b):
    P = random_polytope(seed, 3, 8, "general")
    H = Halfspace((Fraction(a, 4), Fraction(b, 4), Fraction(1)), Fraction(a + b, 16))
    X = np.random.default_rng(seed).normal(size=(5, 3))
    parts = [clip(P, H), clip(P, H.complement()), slice_hyperplane(P, H)]
    lhs = zeta_valuation(parts[0], zeta, X) + zeta_valuation(parts[1], zeta, X)
    rhs = zeta_valuation(P, zeta, X) + zeta_valuation(parts[2], zeta, X)
    assert np.allclose(lhs, rhs, rtol=1e-9, atol=1e-9)


@SETTINGS
@given(seeds, seeds, zetas, dims)
def test_contravariance(seed, mseed, zeta, n):
    P = random_polytope(seed, n, n + 4, "contains_origin")
    M = random_unimodular(mseed, n, 4)
    X = np.random.default_rng(seed).normal(size=(5, n))
    lhs = zeta_valuation(apply_linear(P, M), zeta, X)
    rhs = zeta_valuation(P, zeta, X @ M.inverse.as_array().T)
    assert np.allclose(lhs, rhs, rtol=1e-9, atol=1e-9)
