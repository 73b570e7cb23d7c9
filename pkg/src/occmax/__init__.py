"""Maximum-load probabilities for r balls thrown into n boxes.

``P(r, n, m)`` is the probability that no box receives more than ``m`` balls.
Engines: exact rationals, fixed and adaptive decimal precision, a Poisson
approximation, and brute-force oracles for small cases.
"""

from ._validation import (
    ComputationRefused,
    DegenerateFitError,
    OccupancyProblem,
    PrecisionCapExceeded,
)
from .asymptotics import (
    GrowthEstimate,
    LogFitModel,
    LogPolynomialRegressor,
    asy_estimate,
    empirical_growth,
    expectation_log_fit,
    fit_log_polynomial,
    poisson_moment_fits,
)
from .compare import ComparisonReport, compare_grid
from .distribution import MaxLoadDistribution, MomentSummary, max_load_pmf, moments, poisson_max_load_pmf
from .exact import ExactProbability, b_count, count_exact, prnm_exact
from .floatprec import ApproxValue, agreed_significant_digits, prnm_float, prnm_reliable
from .kernel import OpCounter, Polynomial, miller_power, naive_power, scaled_exp_coeffs, truncated_exp_coeffs
from .oracle import MonteCarloResult, brute_force_prob, enumerate_placements_prob, monte_carlo
from .poisson import (
    PoissonQuery,
    a_priori_tail,
    expected_exceeders,
    largest_m,
    poisson_cdf,
    q_poisson,
    smallest_m,
)

__version__ = "0.1.0"

__all__ = [
    "ApproxValue", "ComparisonReport", "ComputationRefused", "DegenerateFitError", "ExactProbability",
    "GrowthEstimate", "LogFitModel", "LogPolynomialRegressor", "MaxLoadDistribution", "MomentSummary",
    "MonteCarloResult", "OccupancyProblem", "OpCounter", "PoissonQuery", "Polynomial", "PrecisionCapExceeded",
    "a_priori_tail", "agreed_significant_digits", "asy_estimate", "b_count", "brute_force_prob", "compare_grid",
    "count_exact", "empirical_growth", "enumerate_placements_prob", "expectation_log_fit", "expected_exceeders",
    "fit_log_polynomial", "largest_m", "max_load_pmf", "miller_power", "moments", "monte_carlo", "naive_power",
    "poisson_cdf", "poisson_max_load_pmf", "poisson_moment_fits", "prnm_exact", "prnm_float", "prnm_reliable",
    "q_poisson", "scaled_exp_coeffs", "smallest_m", "truncated_exp_coeffs",
]
