import json

import numpy as np
import pytest

from slval.measures import (AtomicSphereMeasure, cone_volume_measure, restrict_nonzero,
                            surface_area_measure)
from slval.polytope import Polytope, apply_linear, random_polytope, random_unimodular
from slval.simplices import standard_simplex

T3 = standard_simplex(3, 3)
CUBE = Polytope([[a, b, c] for a in (0, 1) for b in (0, 1) for c in (0, 1)])


def test_surface_area_of_simplex():
    S = surface_area_measure(T3)
    assert S.kind == "surface_area"
    assert sorted(np.round(S.weights, 12)) == sorted(
        np.round([0.5, 0.5, 0.5, np.sqrt(3) / 2], 12))
    assert np.allclose(S.weights @ S.normals, 0, atol=1e-15)


def test_cube_measures():
    S = surface_area_measure(CUBE)
    assert len(S.atoms) == 6 and np.allclose(S.weights, 1)
    assert cone_volume_measure(CUBE).total_mass == 1.0
    assert len(restrict_nonzero(cone_volume_measure(CUBE), CUBE).atoms) == 3


def test_cone_volume_of_simplex():
    V = cone_volume_measure(T3)
    nonzero = [a for a in V.atoms if a.w != 0]
    assert len(nonzero) == 1
    assert nonzero[0].w == pytest.approx(1 / 6, abs=1e-16)
    R = restrict_nonzero(V, T3)
    assert len(R.atoms) == 1
    assert np.allclose(R.atoms[0].u, np.ones(3) / np.sqrt(3))


def test_signed_cone_volume_outside_origin():
    P = Polytope([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]])
    V = cone_volume_measure(P)
    assert not P.contains_origin
    assert any(w < 0 for w in V.weights)
    assert V.total_mass == pytest.approx(P.volume, abs=1e-15)


def test_interior_origin_keeps_everything():
    P = random_polytope(3, 3, 9, "interior")
    V = cone_volume_measure(P)
    assert len(restrict_nonzero(V, P).atoms) == len(V.atoms)
    assert all(w > 0 for w in V.weights)


def test_restrict_idempotent_and_foreign_atoms():
    P = random_polytope(1, 3, 8)
    R = restrict_nonzero(cone_volume_measure(P), P)
    assert len(restrict_nonzero(R, P).atoms) == len(R.atoms)
    with pytest.raises(ValueError):
        restrict_nonzero(cone_volume_measure(CUBE), T3)


def test_lower_dimensional_convention():
    tri = standard_simplex(2, 3)
    S = surface_area_measure(tri)
    assert len(S.atoms) == 2
    assert np.allclose(S.weights, 0.5) and np.allclose(S.normals.sum(0), 0)
    V = cone_volume_measure(tri)
    assert V.total_mass == 0
    assert len(surface_area_measure(standard_simplex(1, 3)).atoms) == 0
    off = Polytope([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    W = cone_volume_measure(off)
    assert sorted(W.weights) == pytest.approx([-1 / 6, 1 / 6])


def test_unimodular_pushforward_keeps_mass():
    for seed in range(10):
        P = random_polytope(seed, 3, 8)
        M = random_unimodular(seed, 3, 3)
        a = cone_volume_measure(P).total_mass
        b = cone_volume_measure(apply_linear(P, M)).total_mass
        assert abs(a - b) <= 1e-10
        assert abs(a - P.volume) <= 1e-10


def test_pushforward_identity_per_atom():
    # V_{MP}(omega) = V_P(M^t omega): the cone weight at M^{-t}u equals the one at u
    P = random_polytope(7, 3, 8)
    M = random_unimodular(7, 3, 3)
    MP = apply_linear(P, M)
    Minv_t = M.inverse.transpose.as_array()
    src = {tuple(np.round(a.u, 9)): a.w for a in cone_volume_measure(P).atoms}
    for a in cone_volume_measure(P).atoms:
        v = Minv_t @ a.u
        v /= np.linalg.norm(v)
        match = [b for b in cone_volume_measure(MP).atoms if np.allclose(b.u, v, atol=1e-9)]
        assert len(match) == 1 and match[0].w == pytest.approx(src[tuple(np.round(a.u, 9))])


def test_json_and_validation():
    V = cone_volume_measure(T3)
    data = json.loads(V.dumps())
    assert data["kind"] == "cone_volume" and len(data["atoms"]) == 4
    with pytest.raises(ValueError):
        AtomicSphereMeasure(atoms=(), kind="bogus", n=3)
    assert V.integrate(lambda U: np.ones(len(U))) == pytest.approx(1 / 6)
