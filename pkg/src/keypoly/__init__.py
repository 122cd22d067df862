"""Exact computations with rank-one valuations on K[x]: truncations, key
polynomials, pseudo-convergent chains, and p-power rewrites of limit keys."""

from .basefield import (
    HahnSeries,
    hahn_field,
    hahn_monomial,
    hahn_series,
    padic_rationals,
    prime_field,
    rational_functions,
)
from .expansion import Expansion, TruncationReport, constant_coefficient, expand, truncation_report
from .limit import (
    LimitScenario,
    choose_base_key,
    fixedness_at_horizon,
    load_scenario,
    parse_scenario,
    ppower_rewrite,
    ppower_split,
    reduced_ppower_rewrite,
    serialize_scenario,
    stability_at_horizon,
    validate_scenario,
)
from .literals import field_from_name, parse_poly
from .oracle import CHECKS, run_all, run_check
from .poly import Poly, XPoly, compose, hasse_derivative, hasse_derivative_x, poly, poly_divmod, taylor_coefficients, xpoly
from .valgroup import INF, ExplicitGammas, GammaGenerator, MinimizerInput, Value, eventual_minimizer
from .valuation import AugmentedValuation, GaussValuation, SeriesValuation, epsilon_report, probe_key

__version__ = "0.1.0"
