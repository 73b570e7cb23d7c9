"""Empirical growth constants and least-squares fits in ``log n``.

Two tools live here.  :func:`empirical_growth` reads off ``mu`` and ``c0`` in
``C(n) ~ c0 * mu**n`` from two consecutive terms of ``C(n) = P(a*n, b*n, m)``.
:class:`LogPolynomialRegressor` fits ``y ~ sum_j beta_j (ln n)**j`` and is
what the moment sweeps use to summarize how the max-load statistics grow.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction

import mpmath
import numpy as np
from joblib import Parallel, delayed
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted, check_X_y, check_array

from ._validation import DegenerateFitError, as_rational, check_nonneg_int, check_pos_int
from .distribution import max_load_pmf, moments, poisson_max_load_pmf
from .floatprec import prnm_reliable
from .kernel import float_context

GROWTH_DIGITS = 40
FIT_DIGITS = 50


@dataclass(frozen=True)
class GrowthEstimate:
    a: int
    b: int
    m: int
    N: int
    mu: Decimal
    c0: Decimal

    def __call__(self, n: int) -> Decimal:
        return asy_estimate(self, n)

    def to_dict(self) -> dict:
        return {
            "a": self.a, "b": self.b, "m": self.m, "N": self.N,
            "mu": str(self.mu), "c0": str(self.c0),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GrowthEstimate":
        return cls(
            int(data["a"]), int(data["b"]), int(data["m"]), int(data["N"]),
            Decimal(data["mu"]), Decimal(data["c0"]),
        )


def empirical_growth(a: int, b: int, m: int, N: int = 200, *, k: int = 20) -> GrowthEstimate:
    """Estimate ``mu = C(N+1)/C(N)`` and ``c0 = C(N)/mu**N`` for ``C(n) = P(a*n, b*n, m)``.

    Terms are evaluated with :func:`~occmax.floatprec.prnm_reliable` to ``k``
    significant digits.
    """
    a, b = check_pos_int(a, "a"), check_pos_int(b, "b")
    m = check_nonneg_int(m, "m")
    N = check_pos_int(N, "N")
    if N < 10:
        raise ValueError("N must be >= 10")
    if b * m < a:
        raise ValueError(f"C(n) vanishes identically: cap {m} times {b} boxes is below {a} balls")
    c_n = prnm_reliable(a * N, b * N, m, k=k).value
    c_next = prnm_reliable(a * (N + 1), b * (N + 1), m, k=k).value
    if c_n == 0:
        raise ValueError(f"C({N}) evaluated to zero")
    with localcontext(float_context(GROWTH_DIGITS + 10)):
        mu = c_next / c_n
        c0 = (c_n.ln() - N * mu.ln()).exp()
        return GrowthEstimate(a, b, m, N, +mu, +c0)


def asy_estimate(g: GrowthEstimate, n: int) -> Decimal:
    """``c0 * mu**n``, evaluated through logarithms."""
    n = check_pos_int(n, "n")
    with localcontext(float_context(GROWTH_DIGITS + 10)):
        return +(g.c0.ln() + n * g.mu.ln()).exp()


@dataclass(frozen=True)
class LogFitModel:
    """``y ~ sum_j coefficients[j] * (ln n)**j``."""

    degree: int
    coefficients: tuple
    residual: float
    fit_range: tuple = ()

    def predict(self, n):
        x = np.log(np.asarray(n, dtype=float))
        return np.polynomial.polynomial.polyval(x, [float(c) for c in self.coefficients])

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "coefficients": [str(c) for c in self.coefficients],
            "residual": repr(float(self.residual)),
            "fit_range": list(self.fit_range),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LogFitModel":
        return cls(
            degree=int(data["degree"]),
            coefficients=tuple(Decimal(c) for c in data["coefficients"]),
            residual=float(data["residual"]),
            fit_range=tuple(data["fit_range"]),
        )


class LogPolynomialRegressor(RegressorMixin, BaseEstimator):
    """Least-squares polynomial in the natural log of a positive predictor.

    The normal equations are solved in ``mpmath`` at 50 significant digits,
    so exactly polynomial data is recovered to well below float roundoff.

    Parameters
    ----------
    degree : int, default=1
        Degree ``d`` of the polynomial in ``ln n``.

    Attributes
    ----------
    coef_ : ndarray of shape (degree + 1,)
        ``beta_0 .. beta_d`` as floats.
    coef_exact_ : tuple of mpmath.mpf
        The same coefficients at full working precision.
    residual_ : float
        Root-mean-square error over the training points.
    """

    def __init__(self, degree=1):
        self.degree = degree

    def fit(self, X, y):
        X, y = check_X_y(X, y, ensure_2d=False, dtype=None)
        x = np.asarray(X, dtype=object).reshape(len(X), -1)[:, 0]
        d = check_nonneg_int(self.degree, "degree")
        if len(x) < d + 2:
            raise ValueError(f"need at least {d + 2} points for a degree-{d} fit")
        if any(float(v) < 2 for v in x):
            raise ValueError("all n must be >= 2")
        if len(set(x.tolist())) < d + 1:
            raise DegenerateFitError("fewer distinct n values than coefficients")

        ctx = mpmath.MPContext()
        ctx.dps = FIT_DIGITS
        logs = [ctx.log(ctx.mpf(_mp_str(v))) for v in x]
        ys = [ctx.mpf(_mp_str(v)) for v in y]
        V = ctx.matrix([[t**j for j in range(d + 1)] for t in logs])
        A = V.T * V
        rhs = V.T * ctx.matrix(ys)
        if abs(ctx.det(A)) < ctx.mpf(10) ** (-FIT_DIGITS // 2) * ctx.mnorm(A, 1) ** (d + 1):
            raise DegenerateFitError("normal matrix is numerically singular")
        beta = ctx.lu_solve(A, rhs)
        res = V * beta - ctx.matrix(ys)
        self.coef_exact_ = tuple(beta[j] for j in range(d + 1))
        self.coef_ = np.array([float(c) for c in self.coef_exact_])
        self.residual_ = float(ctx.sqrt(ctx.fsum(e**2 for e in res) / len(ys)))
        self.n_features_in_ = 1
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        X = check_array(X, ensure_2d=False)
        x = np.log(np.asarray(X, dtype=float).reshape(len(X), -1)[:, 0])
        return np.polynomial.polynomial.polyval(x, self.coef_)

    def to_model(self, fit_range=()) -> LogFitModel:
        check_is_fitted(self, "coef_")
        coeffs = tuple(Decimal(mpmath.nstr(c, FIT_DIGITS, strip_zeros=False)) for c in self.coef_exact_)
        return LogFitModel(len(coeffs) - 1, coeffs, self.residual_, tuple(fit_range))


def _mp_str(v) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}" if v.denominator != 1 else str(v.numerator)
    if isinstance(v, (Decimal, int, str)):
        return str(v)
    if isinstance(v, np.integer):
        return str(int(v))
    return repr(float(v))


def fit_log_polynomial(points, d: int = 1, fit_range=()) -> LogFitModel:
    """Least-squares fit of ``y`` against powers of ``ln n`` for ``(n, y)`` pairs."""
    points = list(points)
    if not points:
        raise ValueError("no points to fit")
    X = np.array([p[0] for p in points], dtype=object)
    y = np.array([p[1] for p in points], dtype=object)
    if not fit_range:
        ns = [int(p[0]) for p in points]
        fit_range = (min(ns), max(ns), ns[1] - ns[0] if len(ns) > 1 else 0)
    return LogPolynomialRegressor(degree=d).fit(X, y).to_model(fit_range)


def _sweep(fn, ns, n_jobs):
    if n_jobs is None or n_jobs == 1:
        return [fn(n) for n in ns]
    return Parallel(n_jobs=n_jobs)(delayed(fn)(n) for n in ns)


def _mean_max_load(a, b, engine, n):
    return moments(max_load_pmf(a * n, b * n, engine, 1e-12), 2).mean


def expectation_log_fit(a, b, n_min=300, n_max=1000, step=10, d=1, engine="poisson", *, n_jobs=None):
    """Fit the expected maximum load for ``a*n`` balls in ``b*n`` boxes as a polynomial in ``ln n``.

    ``n`` runs over ``range(n_min, n_max + 1, step)``; each mean comes from a
    max-load pmf truncated at ``1e-12``.  ``engine`` is ``"reliable"`` or
    ``"poisson"``.
    """
    if engine not in ("reliable", "poisson"):
        raise ValueError("engine must be 'reliable' or 'poisson'")
    a, b = check_pos_int(a, "a"), check_pos_int(b, "b")
    ns = list(range(check_pos_int(n_min, "n_min"), check_pos_int(n_max, "n_max") + 1, check_pos_int(step, "step")))
    means = _sweep(lambda n: _mean_max_load(a, b, engine, n), ns, n_jobs)
    return fit_log_polynomial(zip(ns, means), d, (n_min, n_max, step))


def _poisson_summary(R, K, n):
    return moments(poisson_max_load_pmf(R, n, 1e-12), K)


def poisson_moment_fits(R, n_min=300, n_max=1000, step=10, d=1, K=4, *, n_jobs=None) -> list:
    """Fit mean, sd and ``alpha_3..alpha_K`` of the Poisson max-load model as polynomials in ``ln n``.

    Returns one :class:`LogFitModel` per statistic, in the order
    ``[mean, sd, alpha_3, ..., alpha_K]``.
    """
    R = as_rational(R)
    if R <= 0:
        raise ValueError("R must be > 0")
    if K < 2:
        raise ValueError("K must be >= 2")
    ns = list(range(check_pos_int(n_min, "n_min"), check_pos_int(n_max, "n_max") + 1, check_pos_int(step, "step")))
    summaries = _sweep(lambda n: _poisson_summary(R, K, n), ns, n_jobs)
    if any(s.degenerate for s in summaries):
        raise DegenerateFitError("a sampled max-load distribution is a point mass")
    series = [[s.mean for s in summaries], [s.sd for s in summaries]]
    series += [[s.alpha_coeffs[i] for s in summaries] for i in range(K - 2)]
    fr = (n_min, n_max, step)
    return [fit_log_polynomial(zip(ns, ys), d, fr) for ys in series]
