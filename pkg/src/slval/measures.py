"""Atomic measures on the unit sphere attached to a polytope.

A polytope's surface area measure has one atom per facet.  Its cone-volume
measure puts mass ``h_P(u) * area / n`` on the same normals; the mass is
negative on facets whose supporting hyperplane separates them from the
origin.  Polytopes of dimension n-1 carry two opposite atoms, lower
dimensional ones carry none.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

SURFACE_AREA = "surface_area"
CONE_VOLUME = "cone_volume"


@dataclass(frozen=True, eq=False)
class Atom:
    u: np.ndarray
    w: float
    key: tuple = field(default=None, repr=False)
    w_exact: Fraction = field(default=None, repr=False)


@dataclass(frozen=True, eq=False)
class AtomicSphereMeasure:
    atoms: tuple
    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in (SURFACE_AREA, CONE_VOLUME):
            raise ValueError("unknown measure kind %r" % self.kind)
        keys = [a.key for a in self.atoms if a.key is not None]
        if len(keys) != len(set(keys)):
            raise ValueError("atom normals must be distinct")

    @property
    def normals(self):
        return np.array([a.u for a in self.atoms], dtype=float).reshape(-1, self.n)

    @property
    def weights(self):
        return np.array([a.w for a in self.atoms], dtype=float)

    @property
    def total_mass(self):
        if self.atoms and all(a.w_exact is not None for a in self.atoms):
            return float(sum(a.w_exact for a in self.atoms))
        return float(self.weights.sum())

    def integrate(self, f):
        """Sum of ``f(u) * w`` over the atoms; ``f`` receives the normal array."""
        if not self.atoms:
            return 0.0
        return float(np.dot(f(self.normals), self.weights))

    def to_json(self):
        return {"kind": self.kind,
                "atoms": [{"u": [float(c) for c in a.u], "w": float(a.w)}
                          for a in self.atoms]}

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)


def surface_area_measure(P):
    atoms = tuple(Atom(u=f.normal, w=f.area, key=f.key) for f in P.facets)
    return AtomicSphereMeasure(atoms=atoms, kind=SURFACE_AREA, n=P.n)


def cone_volume_measure(P):
    atoms = tuple(Atom(u=f.normal, w=float(f.cone_weight_exact), key=f.key,
                       w_exact=f.cone_weight_exact) for f in P.facets)
    return AtomicSphereMeasure(atoms=atoms, kind=CONE_VOLUME, n=P.n)


def restrict_nonzero(m, P):
    """Drop the atoms at normals u with h_P(u) = 0, decided exactly."""
    by_key = {f.key: f for f in P.facets}
    kept = []
    for a in m.atoms:
        f = by_key.get(a.key)
        if f is None:
            raise ValueError("measure atom does not belong to this polytope")
        if f.offset_exact != 0:
            kept.append(a)
    return AtomicSphereMeasure(atoms=tuple(kept), kind=m.kind, n=m.n)
