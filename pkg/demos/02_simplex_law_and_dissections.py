"""The simplex law for Z_zeta and the simplex dissections behind the
classification, checked in rational arithmetic."""

from fractions import Fraction

from slval import ZetaSpec, zeta_valuation
from slval.harness import check_simplex_dissections
from slval.simplices import axis_point, standard_simplex

zeta = ZetaSpec.power_plus(0.5)
print("Z_zeta(s T^3)(t e3) against s^3/3! zeta(t/s) for zeta(t) = sqrt(t_+)")
for s in (Fraction(1, 2), Fraction(1), Fraction(2)):
    for t in (-1.0, 1.0, 3.0):
        got = zeta_valuation(standard_simplex(3, 3, s), zeta, axis_point(t, 3))
        want = float(s) ** 3 / 6 * float(zeta(t / float(s)))
        print("  s=%-3s t=%4.1f  %.12f  %.12f" % (s, t, got, want))

# Cutting T^d by the hyperplane (1-lam) x1 = lam x2 gives two pieces that are
# linear images of T^d (and a wall that is an image of a lower simplex).
for n in (3, 4):
    rep = check_simplex_dissections(seed=0, n=n)
    exact = rep.details["exact"]
    print("n=%d: %d vertex identities, all exact: %s; worst numeric defect %.2e"
          % (n, len(exact), all(exact.values()), rep.max_defect))
    print("  sample:", next(iter(exact.items())))
