"""Vertex-represented convex polytopes in R^n with exact facet incidence.

Coordinates are stored as :class:`fractions.Fraction`.  All combinatorial
decisions (extreme points, facet planes, whether the origin lies on a facet
or in the relative interior) are made in exact integer arithmetic after
scaling the point set to a common denominator.  Metric quantities (areas,
unit normals, support values) are returned as floats.
"""

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import factorial, sqrt

import numpy as np

from slval._exact import (
    EchelonBasis,
    dot,
    int_cross,
    int_det,
    primitive,
    scale_to_integers,
    sub,
    to_fraction,
)

EPS_GEOM = 1e-10


class DimensionMismatch(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Facet:
    """A facet of a polytope (or one side of an (n-1)-dimensional one).

    ``key`` is the primitive integer outward normal, so two facets of
    different polytopes have parallel outward normals iff their keys agree.
    """

    normal: np.ndarray
    offset: float
    area: float
    key: tuple
    offset_exact: Fraction
    cone_weight_exact: Fraction
    vertices: tuple

    @property
    def contains_origin(self):
        return self.offset_exact == 0

    @property
    def key_array(self):
        return np.array(self.key, dtype=float)


class Halfspace:
    """The closed halfspace ``{x : x . normal <= bound}``."""

    def __init__(self, normal, bound=0):
        self.normal = tuple(to_fraction(c) for c in normal)
        self.bound = to_fraction(bound)
        if all(c == 0 for c in self.normal):
            raise ValueError("halfspace normal must be nonzero")

    def value(self, point):
        return dot(self.normal, point) - self.bound

    def complement(self):
        """The opposite closed halfspace (sharing the boundary hyperplane)."""
        return Halfspace([-c for c in self.normal], -self.bound)

    def to_json(self):
        return {"normal": [str(c) for c in self.normal], "bound": str(self.bound)}

    def __repr__(self):
        return "Halfspace(%s, %s)" % ([str(c) for c in self.normal], self.bound)


class LinearMap:
    """An n x n matrix with exact entries."""

    def __init__(self, matrix):
        rows = [tuple(to_fraction(c) for c in r) for r in matrix]
        size = len(rows)
        if size == 0 or any(len(r) != size for r in rows):
            raise ValueError("linear map needs a square matrix")
        self.matrix = tuple(rows)
        self.n = size

    @classmethod
    def identity(cls, n):
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @cached_property
    def det(self):
        m = [list(r) for r in self.matrix]
        size = self.n
        det = Fraction(1)
        for k in range(size):
            piv = next((i for i in range(k, size) if m[i][k] != 0), None)
            if piv is None:
                return Fraction(0)
            if piv != k:
                m[k], m[piv] = m[piv], m[k]
                det = -det
            det *= m[k][k]
            for i in range(k + 1, size):
                f = m[i][k] / m[k][k]
                if f:
                    m[i] = [a - f * b for a, b in zip(m[i], m[k])]
        return det

    @property
    def unimodular(self):
        return abs(float(self.det) - 1.0) <= EPS_GEOM

    @cached_property
    def inverse(self):
        size = self.n
        if self.det == 0:
            raise ValueError("singular linear map")
        aug = [list(r) + [Fraction(int(i == j)) for j in range(size)]
               for i, r in enumerate(self.matrix)]
        for k in range(size):
            piv = next(i for i in range(k, size) if aug[i][k] != 0)
            aug[k], aug[piv] = aug[piv], aug[k]
            inv = 1 / aug[k][k]
            aug[k] = [a * inv for a in aug[k]]
            for i in range(size):
                if i != k and aug[i][k]:
                    f = aug[i][k]
                    aug[i] = [a - f * b for a, b in zip(aug[i], aug[k])]
        return LinearMap([r[size:] for r in aug])

    @property
    def transpose(self):
        return LinearMap(list(zip(*self.matrix)))

    def __matmul__(self, other):
        if isinstance(other, LinearMap):
            cols = list(zip(*other.matrix))
            return LinearMap([[dot(r, c) for c in cols] for r in self.matrix])
        return tuple(dot(r, other) for r in self.matrix)

    def apply(self, point):
        return tuple(dot(r, point) for r in self.matrix)

    def as_array(self):
        return np.array([[float(c) for c in r] for r in self.matrix])

    def __eq__(self, other):
        return isinstance(other, LinearMap) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return "LinearMap(%s)" % [[str(c) for c in r] for r in self.matrix]


def _simplicial_hull(pts, d):
    """Beneath-beyond hull of distinct integer points spanning R^d (d >= 2).

    Returns a list of boundary simplices ``(vertex indices, N, off)`` with
    ``N . x <= off`` on the hull.  A point sees a facet when it lies above or
    on the facet hyperplane; points not strictly above any facet are skipped.
    """
    basis = EchelonBasis(d)
    simplex = [0]
    for i in range(1, len(pts)):
        if basis.add(sub(pts[i], pts[0])):
            simplex.append(i)
            if len(simplex) == d + 1:
                break
    if len(simplex) != d + 1:
        raise ValueError("points do not span the expected dimension")
    centre = tuple(sum(pts[i][k] for i in simplex) for k in range(d))
    weight = d + 1

    facets = {}
    ridges = {}
    counter = [0]

    def plane(verts):
        p0 = pts[verts[0]]
        normal = primitive(int_cross([sub(pts[v], p0) for v in verts[1:]]))
        off = dot(normal, p0)
        if dot(normal, centre) > weight * off:
            normal = tuple(-c for c in normal)
            off = -off
        return normal, off

    def add_facet(verts):
        verts = tuple(sorted(verts))
        normal, off = plane(verts)
        fid = counter[0]
        counter[0] += 1
        facets[fid] = (verts, normal, off)
        for k in range(d):
            ridges.setdefault(verts[:k] + verts[k + 1:], []).append(fid)

    def drop_facet(fid):
        verts = facets.pop(fid)[0]
        for k in range(d):
            r = verts[:k] + verts[k + 1:]
            lst = ridges[r]
            lst.remove(fid)
            if not lst:
                del ridges[r]

    for k in range(d + 1):
        add_facet(simplex[:k] + simplex[k + 1:])

    in_simplex = set(simplex)
    for pi, p in enumerate(pts):
        if pi in in_simplex:
            continue
        visible = set()
        strict = False
        for fid, (_, normal, off) in facets.items():
            s = dot(normal, p) - off
            if s >= 0:
                visible.add(fid)
                if s > 0:
                    strict = True
        if not strict:
            continue
        horizon = []
        for fid in visible:
            verts = facets[fid][0]
            for k in range(d):
                r = verts[:k] + verts[k + 1:]
                if any(g not in visible for g in ridges[r]):
                    horizon.append(r)
        for fid in visible:
            drop_facet(fid)
        for r in horizon:
            add_facet(r + (pi,))

    out = list(facets.values())
    for _, normal, off in out:
        for p in pts:
            if dot(normal, p) > off:
                raise RuntimeError("hull construction failed verification")
    return out


class _Analysis:
    """Exact combinatorial analysis of a finite point set."""

    def __init__(self, points, n):
        self.n = n
        pts = sorted(set(points))
        self.facets = []
        self.volume_exact = Fraction(0)
        self.in_affine_hull = False
        self.contains_origin = False
        self.origin_in_relint = False
        if not pts:
            self.dim = -1
            self.vertices = ()
            return
        scale, ints = scale_to_integers(pts)
        base = ints[0]
        basis = EchelonBasis(n)
        independent = []
        for p in ints[1:]:
            direction = sub(p, base)
            if basis.add(direction):
                independent.append(direction)
        d = basis.rank
        self.dim = d
        self.in_affine_hull = basis.contains(tuple(-c for c in base))
        zero = (0,) * n

        if d == 0:
            self.vertices = (pts[0],)
            self.contains_origin = self.origin_in_relint = ints[0] == zero
            return

        pivots = basis.pivots
        proj = [tuple(p[j] for j in pivots) for p in ints]

        if d == 1:
            vals = [q[0] for q in proj]
            lo = min(range(len(vals)), key=vals.__getitem__)
            hi = max(range(len(vals)), key=vals.__getitem__)
            self.vertices = tuple(sorted((pts[lo], pts[hi])))
            if self.in_affine_hull:
                self.contains_origin = vals[lo] <= 0 <= vals[hi]
                self.origin_in_relint = vals[lo] < 0 < vals[hi]
            if n == 2:
                self._lower_facets(pts, ints, scale, independent, pivots,
                                   Fraction(vals[hi] - vals[lo], scale))
            return

        pieces = _simplicial_hull(proj, d)
        planes = {}
        for verts, normal, off in pieces:
            planes.setdefault(normal, (off, []))[1].append(verts)
        candidates = sorted({v for verts, _, _ in pieces for v in verts})
        extreme = []
        for i in candidates:
            incident = EchelonBasis(d)
            for normal, (off, _) in planes.items():
                if dot(normal, proj[i]) == off:
                    incident.add(normal)
                    if incident.rank == d:
                        break
            if incident.rank == d:
                extreme.append(i)
        self.vertices = tuple(pts[i] for i in extreme)
        if self.in_affine_hull:
            offs = [off for off, _ in planes.values()]
            self.contains_origin = all(off >= 0 for off in offs)
            self.origin_in_relint = all(off > 0 for off in offs)

        apex = proj[extreme[0]]
        total = 0
        for verts, _, _ in pieces:
            total += abs(int_det([sub(proj[v], apex) for v in verts]))
        vol = Fraction(total, factorial(d) * scale ** d)

        if d == n:
            self.volume_exact = vol
            self._full_facets(planes, proj, extreme, scale)
        elif d == n - 1:
            self._lower_facets(pts, ints, scale, independent, pivots, vol)

    def _full_facets(self, planes, ints, extreme, scale):
        n = self.n
        fact = factorial(n - 1)
        vert_index = {i: k for k, i in enumerate(extreme)}
        out = []
        for normal, (off, pieces) in sorted(planes.items()):
            s = 0
            for verts in pieces:
                p0 = ints[verts[0]]
                rows = [sub(ints[v], p0) for v in verts[1:]]
                s += abs(int_det(rows + [normal]))
            norm2 = sum(c * c for c in normal)
            norm = sqrt(norm2)
            area = s / (scale ** (n - 1) * fact * norm)
            incident = tuple(sorted(vert_index[i] for i in extreme
                                    if dot(normal, ints[i]) == off))
            out.append(Facet(
                normal=np.array(normal, dtype=float) / norm,
                offset=(off / scale) / norm,
                area=area,
                key=normal,
                offset_exact=Fraction(off, scale),
                cone_weight_exact=Fraction(off * s, scale ** n * fact * n * norm2),
                vertices=incident,
            ))
        self.facets = out

    def _lower_facets(self, pts, ints, scale, independent, pivots, vol):
        # (n-1)-dimensional polytope: two opposite atoms carrying its volume
        n = self.n
        normal = primitive(int_cross(independent))
        dropped = next(j for j in range(n) if j not in pivots)
        off = dot(normal, ints[0])
        norm = sqrt(sum(c * c for c in normal))
        area = float(vol) * norm / abs(normal[dropped])
        weight = Fraction(off, scale) * vol / (n * abs(normal[dropped]))
        allv = tuple(range(len(self.vertices)))
        out = []
        for sgn in (1, -1):
            key = tuple(sgn * c for c in normal)
            out.append(Facet(
                normal=np.array(key, dtype=float) / norm,
                offset=sgn * (off / scale) / norm,
                area=area,
                key=key,
                offset_exact=Fraction(sgn * off, scale),
                cone_weight_exact=sgn * weight,
                vertices=allv,
            ))
        self.facets = sorted(out, key=lambda f: f.key)


class Polytope:
    """Convex hull of finitely many points in R^n, stored by its vertices.

    The constructor canonicalizes: duplicate and non-extreme input points are
    discarded and the vertices are sorted lexicographically.  An empty vertex
    list (with explicit ``n``) is the empty polytope.
    """

    def __init__(self, vertices, n=None):
        pts = [tuple(to_fraction(c) for c in v) for v in vertices]
        if n is None:
            if not pts:
                raise ValueError("ambient dimension needed for an empty polytope")
            n = len(pts[0])
        for p in pts:
            if len(p) != n:
                raise DimensionMismatch(
                    "point %s does not lie in R^%d" % ([str(c) for c in p], n))
        self.n = n
        self._a = _Analysis(pts, n)
        self.vertices = self._a.vertices

    @classmethod
    def empty(cls, n):
        return cls([], n=n)

    @property
    def dim(self):
        return self._a.dim

    @property
    def is_empty(self):
        return self._a.dim < 0

    @property
    def contains_origin(self):
        return self._a.contains_origin

    @property
    def origin_in_relint(self):
        return self._a.origin_in_relint

    @property
    def origin_in_interior(self):
        return self.dim == self.n and self.origin_in_relint

    @property
    def facets(self):
        return list(self._a.facets)

    @property
    def volume_exact(self):
        return self._a.volume_exact

    @property
    def volume(self):
        return float(self._a.volume_exact)

    @cached_property
    def vertex_array(self):
        return np.array([[float(c) for c in v] for v in self.vertices],
                        dtype=float).reshape(len(self.vertices), self.n)

    @cached_property
    def diameter(self):
        V = self.vertex_array
        if len(V) < 2:
            return 0.0
        diff = V[:, None, :] - V[None, :, :]
        return float(np.sqrt((diff ** 2).sum(-1)).max())

    @cached_property
    def facet_arrays(self):
        """Float arrays (keys, exact offsets, areas, cone weights) and a zero-offset mask."""
        fs = self._a.facets
        n = self.n
        keys = np.array([f.key for f in fs], dtype=float).reshape(len(fs), n)
        offs = np.array([float(f.offset_exact) for f in fs])
        areas = np.array([f.area for f in fs])
        weights = np.array([float(f.cone_weight_exact) for f in fs])
        zero = np.array([f.offset_exact == 0 for f in fs], dtype=bool)
        return keys, offs, areas, weights, zero

    @cached_property
    def with_origin(self):
        if self.is_empty or self.contains_origin:
            return self
        return Polytope(list(self.vertices) + [(0,) * self.n], n=self.n)

    def support(self, x):
        x = np.asarray(x, dtype=float)
        if self.is_empty:
            return -np.inf if x.ndim == 1 else np.full(x.shape[0], -np.inf)
        vals = self.vertex_array @ x.T
        return vals.max(axis=0)

    def support_exact(self, x):
        x = [to_fraction(c) for c in x]
        return max(dot(v, x) for v in self.vertices)

    def to_json(self):
        return {"n": self.n,
                "vertices": [[_frac_str(c) for c in v] for v in self.vertices]}

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data, parse_float=Fraction)
        unknown = set(data) - {"n", "vertices"}
        if unknown:
            raise ValueError("unknown polytope keys: %s" % sorted(unknown))
        n = int(data["n"])
        verts = data["vertices"]
        if not verts:
            raise ValueError("polytope file has no vertices")
        return cls(verts, n=n)

    def __eq__(self, other):
        return (isinstance(other, Polytope) and self.n == other.n
                and self.vertices == other.vertices)

    def __hash__(self):
        return hash((self.n, self.vertices))

    def __repr__(self):
        return "Polytope(n=%d, dim=%d, vertices=%s)" % (
            self.n, self.dim, [[_frac_str(c) for c in v] for v in self.vertices])


def _frac_str(c):
    return str(c.numerator) if c.denominator == 1 else str(c)


# --------------------------------------------------------------------------
# operations

def convex_hull(points, n=None):
    return Polytope(points, n=n)


def facets(P):
    return P.facets


def support(P, x):
    return P.support(x)


def dim(P):
    return P.dim


@dataclass(frozen=True)
class OriginPosition:
    dim: int
    contains: bool
    in_relint: bool

    @property
    def label(self):
        if not self.contains:
            return "outside"
        if self.in_relint:
            return "relative_interior" if self.dim >= 0 else "outside"
        return "boundary"


def origin_position(P):
    return OriginPosition(P.dim, P.contains_origin, P.origin_in_relint)


def volume(P):
    return P.volume


def hull_with_origin(P):
    if P.is_empty:
        return P
    return P.with_origin


def _cut_points(P, H):
    vals = [H.value(v) for v in P.vertices]
    below = [v for v, s in zip(P.vertices, vals) if s < 0]
    on = [v for v, s in zip(P.vertices, vals) if s == 0]
    above = [v for v, s in zip(P.vertices, vals) if s > 0]
    sv = dict(zip(P.vertices, vals))
    crossings = []
    for v in above:
        for w in below:
            t = sv[v] / (sv[v] - sv[w])
            crossings.append(tuple(a + t * (b - a) for a, b in zip(v, w)))
    return below, on, crossings


def clip(P, H):
    """P intersected with the closed halfspace H (possibly empty)."""
    if P.is_empty:
        return P
    below, on, crossings = _cut_points(P, H)
    return Polytope(below + on + crossings, n=P.n)


def slice_hyperplane(P, H):
    """P intersected with the boundary hyperplane of H."""
    if P.is_empty:
        return P
    _, on, crossings = _cut_points(P, H)
    return Polytope(on + crossings, n=P.n)


def apply_linear(P, M):
    if M.n != P.n:
        raise DimensionMismatch("map and polytope dimensions differ")
    if M.det == 0:
        raise ValueError("singular linear map")
    return Polytope([M.apply(v) for v in P.vertices], n=P.n)


def translate(P, y):
    y = [to_fraction(c) for c in y]
    return Polytope([tuple(a + b for a, b in zip(v, y)) for v in P.vertices], n=P.n)


def scale(P, s):
    s = to_fraction(s)
    return Polytope([tuple(s * a for a in v) for v in P.vertices], n=P.n)


# --------------------------------------------------------------------------
# random generation

GRID = 1024


def _grid_point(x):
    return tuple(Fraction(int(round(c * GRID)), GRID) for c in x)


def _ball(rng, count, n):
    g = rng.standard_normal((count, n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return g * rng.random((count, 1)) ** (1.0 / n)


def _centroid(points):
    k = len(points)
    return tuple(sum(p[i] for p in points) / k for i in range(len(points[0])))


def random_polytope(seed, n, vertex_count, mode="contains_origin"):
    """Deterministic random polytope from ``vertex_count`` points in a ball.

    mode ``interior`` puts the origin in the interior, ``contains_origin``
    chooses per seed between an interior origin and the origin as a vertex,
    and ``general`` shifts the cloud so the origin may fall outside.
    """
    if vertex_count < n + 1:
        raise ValueError("need at least n+1 points")
    if mode not in ("contains_origin", "interior", "general"):
        raise ValueError("unknown mode %r" % mode)
    rng = np.random.default_rng(seed)
    while True:
        pts = [_grid_point(x) for x in _ball(rng, vertex_count, n)]
        if mode == "general":
            shift = _grid_point(_ball(rng, 1, n)[0] * 1.5)
            pts = [tuple(a + b for a, b in zip(p, shift)) for p in pts]
            P = Polytope(pts, n=n)
        elif mode == "contains_origin" and rng.random() < 0.5:
            direction = rng.standard_normal(n)
            direction /= np.linalg.norm(direction)
            shift = _grid_point(direction * 0.8)
            pts = [tuple(a + b for a, b in zip(p, shift)) for p in pts]
            P = Polytope(pts + [(Fraction(0),) * n], n=n)
        else:
            c = _centroid(pts)
            P = Polytope([tuple(a - b for a, b in zip(p, c)) for p in pts], n=n)
        if P.dim == n:
            return P


def random_flat_polytope(seed, n, d, vertex_count, mode="contains_origin"):
    """Random polytope of dimension ``d < n`` (``mode`` as in random_polytope)."""
    rng = np.random.default_rng(seed)
    while True:
        frame = [_grid_point(v) for v in rng.standard_normal((d, n))]
        coeffs = _ball(rng, vertex_count, d) if d > 0 else np.zeros((vertex_count, 0))
        pts = []
        for c in coeffs:
            cf = [Fraction(int(round(a * 64)), 64) for a in c]
            pts.append(tuple(sum(cf[k] * frame[k][i] for k in range(d))
                             for i in range(n)))
        if mode == "general":
            shift = _grid_point(_ball(rng, 1, n)[0] * 1.5)
        elif mode == "contains_origin" and rng.random() < 0.5 and d > 0:
            shift = pts[0]
            shift = tuple(-a for a in shift)
        else:
            shift = tuple(-a for a in _centroid(pts))
        pts = [tuple(a + b for a, b in zip(p, shift)) for p in pts]
        P = Polytope(pts, n=n)
        if P.dim == d:
            return P


def random_unimodular(seed, n, shear_count):
    """Product of integer elementary shears; determinant exactly one."""
    rng = np.random.default_rng(seed)
    M = LinearMap.identity(n)
    for _ in range(shear_count):
        i, j = rng.choice(n, size=2, replace=False)
        m = int(rng.choice([-2, -1, 1, 2]))
        rows = [[int(a == b) for b in range(n)] for a in range(n)]
        rows[i][j] = m
        M = LinearMap(rows) @ M
    return M


def random_cutting_halfspace(rng, P, through_origin=False):
    """A rational halfspace whose boundary strictly separates vertices of P."""
    n = P.n
    for _ in range(1000):
        a = tuple(Fraction(int(round(c * 64)), 64) for c in rng.standard_normal(n))
        if all(c == 0 for c in a):
            continue
        vals = [dot(a, v) for v in P.vertices]
        lo, hi = min(vals), max(vals)
        if through_origin:
            b = Fraction(0)
        else:
            t = Fraction(int(rng.integers(1, 16)), 16)
            b = lo + t * (hi - lo)
        if lo < b < hi:
            return Halfspace(a, b)
    raise ValueError("could not find a cutting hyperplane")
