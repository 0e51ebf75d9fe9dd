"""Treat a valuation as a black box, recover its constants and zeta from
simplex queries, and certify the fit on fresh random polytopes."""

import numpy as np

from slval import BlackBoxValuation, ValuationSpec, ZetaSpec, fit
from slval.classifier import NotClassifiable, certify, oracle_from_json

hidden = ValuationSpec(zeta=ZetaSpec.abs_power(0.5), c0=1.0, c0_prime=-0.25, c_n1=2.0)
Z = BlackBoxValuation.from_spec(hidden)
rep = fit(Z, 3, np.linspace(-4, 4, 17))
print("recovered c0=%.6f c0'=%.6f c_n1=%.6f" % (rep.spec.c0, rep.spec.c0_prime, rep.spec.c_n1))
print("zeta on the grid vs sqrt|t|:")
for t, v in list(zip(rep.spec.zeta.knots, rep.spec.zeta.values))[::4]:
    print("  t=%5.2f  %.6f  %.6f" % (t, v, np.sqrt(abs(t))))
rep = certify(Z, rep.oracle_spec, 3, report=rep)
print("certified:", rep.certified, "max residual %.2e" % rep.residual_max)

# Origin-free polytopes: the hull variants show up in the tilde part.
full = ValuationSpec(zeta=ZetaSpec.poly(0, 1), scope="P_full", c_tilde0=1.0,
                     zeta_tilde=ZetaSpec.constant(1))
rep = fit(BlackBoxValuation.from_spec(full), 3, np.linspace(-2, 2, 5))
print("P_full fit: c~0=%.3f, zeta~ values %s" % (rep.spec.c_tilde0,
                                                np.round(rep.spec.zeta_tilde.values, 6)))

# Diameter is not a valuation: the fit refuses with a diagnostic.
bad = oracle_from_json({"domain": "P_o", "terms": [{"family": "diameter"}]})
try:
    fit(bad, 3)
except NotClassifiable as exc:
    print("diameter oracle rejected by", exc.diagnostic)
