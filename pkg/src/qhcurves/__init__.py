"""Exact invariants of algebroid curves and quasihomogeneity tests.

Typical use::

    from qhcurves import CurveSpec, build_algebra, qh_report

    model = build_algebra(CurveSpec.monomial_curve(2, 3))
    qh_report(model).quasihomogeneous   # True
"""

from .algebra import (AlgebraModel, CurveSpec, SeriesSource, build_algebra, compute_conductor,
                      contains, maximal_ideal, verify_equations)
from .criteria import (InvariantReport, detect_weights, jacobian_ideal, module_MA, qh_report,
                       rho_invariant, rho_prime_invariant, subspace_tdt_m, vasconcelos_step)
from .errors import (ComputationError, CriteriaDisagree, CurveError, DegenerateInput,
                     EquationsFailVerification, InputError, NoEquations, NoStabilization,
                     NonUnitDenominator, OrderTooLow, SchemaError)
from .ideals import (FracIdeal, contains_ideal, dual_ideal, endo_ring, hom_ideals,
                     ideal_from_generators, ideal_from_space, ideals_equal, length_quotient,
                     maximal, module_isomorphic, normalization, product_ideals, unit_ideal)
from .polynomial import Polynomial
from .semigroup import (SemigroupTable, delta_set_meets, gamma_of_subspace, is_symmetric,
                        semigroup_of_curve)
from .series import MultiSeries, TruncatedSeries, expand_rational_function, series_arith

__all__ = [
    "AlgebraModel", "ComputationError", "CriteriaDisagree", "CurveError", "CurveSpec",
    "DegenerateInput", "EquationsFailVerification", "FracIdeal", "InputError",
    "InvariantReport", "MultiSeries", "NoEquations", "NoStabilization", "NonUnitDenominator",
    "OrderTooLow", "Polynomial", "SchemaError", "SemigroupTable", "SeriesSource",
    "TruncatedSeries", "build_algebra", "compute_conductor", "contains", "contains_ideal",
    "delta_set_meets", "detect_weights", "dual_ideal", "endo_ring", "expand_rational_function",
    "gamma_of_subspace", "hom_ideals", "ideal_from_generators", "ideal_from_space",
    "ideals_equal", "is_symmetric", "jacobian_ideal", "length_quotient", "maximal",
    "maximal_ideal", "module_MA", "module_isomorphic", "normalization", "product_ideals",
    "qh_report", "rho_invariant", "rho_prime_invariant", "semigroup_of_curve", "series_arith",
    "subspace_tdt_m", "unit_ideal", "vasconcelos_step", "verify_equations",
]

__version__ = "0.1.0"
