"""Distribution of the maximum box load and its moments."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction

from ._validation import (
    ComputationRefused,
    OccupancyProblem,
    as_rational,
    check_nonneg_int,
    check_pos_int,
)
from .exact import fraction_to_str, prnm_exact, str_to_fraction
from .floatprec import prnm_reliable
from .kernel import float_context
from .poisson import POISSON_DIGITS, poisson_cdf, q_poisson

ENGINES = ("exact", "reliable", "poisson")
MOMENT_DIGITS = 40
# r * n above which the exact engine refuses a full pmf scan
MAX_EXACT_COST = 5 * 10**8


def _prob_to_str(p) -> str:
    return fraction_to_str(p) if isinstance(p, Fraction) else str(p)


def _str_to_prob(s: str):
    return str_to_fraction(s) if "/" in s else Decimal(s)


def _to_decimal(p) -> Decimal:
    if isinstance(p, Fraction):
        return Decimal(p.numerator) / Decimal(p.denominator)
    return Decimal(p)


@dataclass(frozen=True)
class MaxLoadDistribution:
    """Probability mass of the maximum load over a contiguous support.

    ``pmf`` holds ``(m, Pr(max load == m))`` pairs in increasing ``m``.
    Probabilities are ``Fraction`` for the exact engine and ``Decimal``
    otherwise.  Mass outside the support is at most ``truncation_eps`` on
    each side.
    """

    r: int
    n: int
    pmf: tuple
    engine: str
    truncation_eps: float
    total_mass: object = field(default=None)

    def __post_init__(self):
        if self.total_mass is None:
            object.__setattr__(self, "total_mass", sum(p for _, p in self.pmf))

    @property
    def problem(self) -> OccupancyProblem:
        return OccupancyProblem(self.r, self.n, 0)

    @property
    def support(self) -> range:
        return range(self.pmf[0][0], self.pmf[-1][0] + 1)

    def as_dict(self) -> dict:
        return dict(self.pmf)

    def cdf(self, m: int):
        """Cumulative mass on ``support`` up to and including ``m``."""
        return sum((p for k, p in self.pmf if k <= m), type(self.total_mass)(0))

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "n": self.n,
            "engine": self.engine,
            "truncation_eps": repr(self.truncation_eps),
            "total_mass": _prob_to_str(self.total_mass),
            "pmf": [[m, _prob_to_str(p)] for m, p in self.pmf],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MaxLoadDistribution":
        return cls(
            r=int(data["r"]),
            n=int(data["n"]),
            pmf=tuple((int(m), _str_to_prob(p)) for m, p in data["pmf"]),
            engine=data["engine"],
            truncation_eps=float(data["truncation_eps"]),
            total_mass=_str_to_prob(data["total_mass"]),
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m", "probability"])
        for m, p in self.pmf:
            w.writerow([m, _prob_to_str(p)])
        return buf.getvalue()


def _cdf_function(r: int, n: int, engine: str, reliable_k: int):
    if engine == "exact":
        return lambda m: prnm_exact(r, n, m).value
    if engine == "reliable":
        return lambda m: prnm_reliable(r, n, m, k=reliable_k).value
    return lambda m: q_poisson(r, n, m)


def max_load_pmf(
    r: int,
    n: int,
    engine: str = "exact",
    eps=0,
    *,
    reliable_k: int = 20,
    max_exact_cost: int = MAX_EXACT_COST,
) -> MaxLoadDistribution:
    """Pmf of the maximum load via first differences of ``P(r, n, m)`` in ``m``.

    The scan starts at ``max(1, ceil(r/n))`` (capped at ``r``) and walks
    outward.  It stops on the left once ``P(r, n, m - 1) <= eps`` and on the
    right once ``1 - P(r, n, m) <= eps``, so the mass left out on each side
    is bounded by ``eps``.  The exact engine with ``eps=0`` yields the full
    support and a total mass of exactly one.
    """
    r = check_nonneg_int(r, "r")
    n = check_pos_int(n, "n")
    if engine not in ENGINES:
        raise ValueError(f"engine must be one of {ENGINES}, got {engine!r}")
    if eps < 0 or (eps == 0 and engine != "exact"):
        raise ValueError("eps must be > 0 (eps == 0 is only allowed for the exact engine)")
    if engine == "exact" and r * n > max_exact_cost:
        raise ComputationRefused(
            f"exact pmf for r={r}, n={n} exceeds the cost bound {max_exact_cost}; "
            "use engine='reliable' or 'poisson'"
        )

    eps_cmp = Fraction(eps) if engine == "exact" else Decimal(repr(float(eps)))
    raw = _cdf_function(r, n, engine, reliable_k)
    cache: dict[int, object] = {}

    def P(m):
        if m < 0:
            return 0
        if m not in cache:
            cache[m] = raw(m)
        return cache[m]

    m0 = min(max(1, -(-r // n)), r)
    hi = m0
    while hi < r and 1 - P(hi) > eps_cmp:
        hi += 1
    lo = m0
    while lo > 0 and P(lo - 1) > eps_cmp:
        lo -= 1

    pmf = tuple((m, P(m) - P(m - 1)) for m in range(lo, hi + 1))
    total = P(hi) - P(lo - 1)
    return MaxLoadDistribution(r, n, pmf, engine, float(eps), total)


def poisson_max_load_pmf(R, n: int, eps) -> MaxLoadDistribution:
    """Poisson-engine pmf for mean load ``R`` (any nonnegative rational) over ``n`` boxes.

    Unlike :func:`max_load_pmf` the ball count ``n * R`` need not be an
    integer; ``r`` is recorded as its floor.
    """
    R = as_rational(R)
    n = check_pos_int(n, "n")
    if eps <= 0:
        raise ValueError("eps must be > 0 for the poisson engine")
    eps_cmp = Decimal(repr(float(eps)))
    cache: dict[int, Decimal] = {}

    def P(m):
        if m < 0:
            return Decimal(0)
        if m not in cache:
            with localcontext(float_context(POISSON_DIGITS + 10)):
                cache[m] = poisson_cdf(R, m) ** n
        return cache[m]

    m0 = max(1, math.ceil(R))
    hi = m0
    while 1 - P(hi) > eps_cmp:
        hi += 1
    lo = m0
    while lo > 0 and P(lo - 1) > eps_cmp:
        lo -= 1
    pmf = tuple((m, P(m) - P(m - 1)) for m in range(lo, hi + 1))
    return MaxLoadDistribution(math.floor(n * R), n, pmf, "poisson", float(eps), P(hi) - P(lo - 1))


@dataclass(frozen=True)
class MomentSummary:
    """Mean, standard deviation and standardized moments ``alpha_3..alpha_K``."""

    mean: Decimal
    sd: Decimal
    alpha_coeffs: tuple = ()
    degenerate: bool = False

    @property
    def skewness(self):
        return self.alpha_coeffs[0] if self.alpha_coeffs else None

    @property
    def kurtosis(self):
        return self.alpha_coeffs[1] if len(self.alpha_coeffs) > 1 else None

    def to_dict(self) -> dict:
        return {
            "mean": str(self.mean),
            "sd": str(self.sd),
            "alpha_coeffs": [str(a) for a in self.alpha_coeffs],
            "degenerate": self.degenerate,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MomentSummary":
        return cls(
            mean=Decimal(data["mean"]),
            sd=Decimal(data["sd"]),
            alpha_coeffs=tuple(Decimal(a) for a in data["alpha_coeffs"]),
            degenerate=bool(data["degenerate"]),
        )


def moments(d, K: int = 4) -> MomentSummary:
    """Moments of a (possibly truncated) max-load pmf, normalized by its total mass.

    ``d`` may be a :class:`MaxLoadDistribution` or a plain ``{m: p}`` mapping.
    A single-point distribution comes back with ``sd == 0``, no alpha
    coefficients and ``degenerate=True``.
    """
    if K < 2:
        raise ValueError("K must be >= 2")
    items = d.pmf if isinstance(d, MaxLoadDistribution) else tuple(sorted(dict(d).items()))
    with localcontext(float_context(MOMENT_DIGITS + 10)):
        pairs = [(Decimal(m), _to_decimal(p)) for m, p in items]
        total = sum(p for _, p in pairs)
        if total <= 0:
            raise ValueError("distribution has no mass")
        mean = sum(m * p for m, p in pairs) / total
        var = sum((m - mean) ** 2 * p for m, p in pairs) / total
        if var <= 0:
            return MomentSummary(+mean, Decimal(0), (), True)
        sd = var.sqrt()
        alphas = tuple(
            +(sum(((m - mean) / sd) ** k * p for m, p in pairs) / total) for k in range(3, K + 1)
        )
        return MomentSummary(+mean, +sd, alphas, False)
