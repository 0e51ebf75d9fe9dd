"""Surface-area and cone-volume atoms of a few polytopes, and the projection
function V_1(P, [-x, x]) read off from them."""

import numpy as np

from slval import Polytope, cone_volume_measure, projection_function, surface_area_measure
from slval.simplices import standard_simplex

cube = Polytope([[a, b, c] for a in (0, 1) for b in (0, 1) for c in (0, 1)])
print("Unit cube with a vertex at the origin")
print("  volume:", cube.volume)
sa = surface_area_measure(cube)
cv = cone_volume_measure(cube)
for a, b in zip(sa.atoms, cv.atoms):
    print("  normal %-16s area %.3f  cone weight %.4f" % (np.round(a.u, 3), a.w, b.w))
print("  cone weights add up to the volume:", cv.total_mass)

# Faces through the origin carry no cone volume, so the shadow of the cube in
# direction e3 comes entirely from the two horizontal faces.
print("  V_1(cube, [-e3, e3]) =", projection_function(cube, [0, 0, 1]))

# A flat triangle in R^3 still has a projection function: it sees both sides.
tri = standard_simplex(2, 3)
for t in (-2.0, 0.5, 1.0):
    print("  V_1(T^2, [-t e3, t e3]) at t=%4.1f: %.4f (2|t|/3! = %.4f)"
          % (t, projection_function(tri, [0, 0, t]), 2 * abs(t) / 6))
