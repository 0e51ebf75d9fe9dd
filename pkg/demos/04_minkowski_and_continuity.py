"""The L_p Minkowski inequality on random pairs, and the body sequence that
separates continuous from discontinuous zeta on origin-free polytopes."""

from slval import ZetaSpec
from slval.harness import check_continuity_witness, check_minkowski_inequality

rep = check_minkowski_inequality(seed=1, trials=30)
print("Minkowski: %d evaluations, min slack %.3e, max equality defect %.1e, passed %s"
      % (rep.trials, rep.details["min_slack"], rep.details["max_equality_defect"], rep.passed))

cases = {"constant": ZetaSpec.constant(1), "sqrt|t|": ZetaSpec.abs_power(0.5),
         "|t| (table)": ZetaSpec.table([-1, 0, 1], [1, 0, 1], (-1, 1))}
for label, zeta in cases.items():
    r = check_continuity_witness(zeta)
    print("%-12s convergent=%-5s defects %s" % (label, r.passed,
                                               ["%.2e" % max(d) for d in r.details["defects"]]))
