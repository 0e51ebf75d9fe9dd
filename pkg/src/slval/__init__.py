"""SL(n) contravariant function-valued valuations on polytopes."""

from slval.classifier import (BlackBoxValuation, FitReport, NotClassifiable, certify, fit,
                              fit_constants, fit_general, fit_zeta, oracle_from_json)
from slval.measures import (AtomicSphereMeasure, cone_volume_measure, restrict_nonzero,
                            surface_area_measure)
from slval.polytope import (Facet, Halfspace, LinearMap, Polytope, apply_linear, clip,
                            convex_hull, hull_with_origin, random_polytope, random_unimodular)
from slval.valuations import (ValuationSpec, eval_representation, lp_mixed_volume,
                              lp_projection, orlicz_mixed_volume, orlicz_projection_support,
                              projection_function, zeta_hull_valuation, zeta_valuation)
from slval.zeta import ZetaSpec

__version__ = "0.1.0"

__all__ = [
    "AtomicSphereMeasure", "BlackBoxValuation", "Facet", "FitReport", "Halfspace", "LinearMap",
    "NotClassifiable", "Polytope", "ValuationSpec", "ZetaSpec", "apply_linear", "certify",
    "clip", "cone_volume_measure", "convex_hull", "eval_representation", "fit",
    "fit_constants", "fit_general", "fit_zeta", "hull_with_origin", "lp_mixed_volume",
    "lp_projection", "oracle_from_json", "orlicz_mixed_volume", "orlicz_projection_support",
    "projection_function", "random_polytope", "random_unimodular", "restrict_nonzero",
    "surface_area_measure", "zeta_hull_valuation", "zeta_valuation",
]
