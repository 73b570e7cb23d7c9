"""Fixed- and adaptive-precision floating evaluation of the occupancy probability.

The power recurrence has terms of both signs once ``k`` exceeds roughly
``n * j``, so at modest precision the cancellation can produce values far
outside ``[0, 1]``.  :func:`prnm_float` deliberately returns whatever the
arithmetic produced; :func:`prnm_reliable` escalates the working precision
until two probes ``d`` and ``d + 100`` digits apart agree.

Working precision is a count of significant decimal digits and the
arithmetic is base-10 (``decimal``), so ``digits=30`` means exactly that.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from decimal import Decimal, localcontext

from ._validation import PrecisionCapExceeded, as_problem, check_pos_int
from .kernel import float_context, miller_power, scaled_exp_coeffs, to_float_domain

logger = logging.getLogger(__name__)

PROBE_SPACING = 100
MAX_DIGITS = 5000


@dataclass(frozen=True)
class ApproxValue:
    value: Decimal
    precision_digits: int
    reliable: bool = False
    agreed_digits: int = 0

    def __float__(self):
        return float(self.value)

    def decimal(self, digits: int | None = None) -> str:
        """Value rounded to ``digits`` significant digits (default: the working precision)."""
        ctx = float_context(digits or self.precision_digits)
        return str(ctx.plus(self.value))

    def to_dict(self) -> dict:
        return {
            "value": str(self.value),
            "precision_digits": self.precision_digits,
            "reliable": self.reliable,
            "agreed_digits": self.agreed_digits,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ApproxValue":
        return cls(
            value=Decimal(data["value"]),
            precision_digits=int(data["precision_digits"]),
            reliable=bool(data["reliable"]),
            agreed_digits=int(data["agreed_digits"]),
        )


def _evaluate(r: int, n: int, m: int, digits: int) -> Decimal:
    # same integer-scaled pipeline as the exact engine, rounded at every step
    if n * m < r:
        return Decimal(0)
    ctx = float_context(digits)
    with localcontext(ctx):
        f = to_float_domain(scaled_exp_coeffs(m), ctx)
        g = miller_power(f, n, r)
        scale = Decimal(n) ** r * Decimal(math.factorial(m)) ** n
        return g[r] * Decimal(math.factorial(r)) / scale


def prnm_float(r, n=None, m=None, *, digits: int = 30) -> ApproxValue:
    """Evaluate the probability at a fixed working precision of ``digits`` decimal digits.

    No clamping is applied: an unstable evaluation comes back as-is (possibly
    negative or larger than one) with ``reliable=False``.
    """
    p = as_problem(r, n, m)
    digits = check_pos_int(digits, "digits")
    if digits < 10:
        raise ValueError("digits must be >= 10")
    return ApproxValue(_evaluate(p.r, p.n, p.m, digits), digits)


def agreed_significant_digits(a: Decimal, b: Decimal, cap: int) -> int:
    """Largest ``k <= cap`` with ``|a - b| <= 10**(1-k) * max(|a|, |b|)``."""
    ctx = float_context(cap + 10)
    scale = max(abs(a), abs(b))
    diff = ctx.subtract(a, b).copy_abs()
    if diff == 0:
        return cap
    if scale == 0:
        return 0
    k = math.floor(1 - ctx.divide(diff, scale).log10())
    return max(0, min(cap, k))


def prnm_reliable(r, n=None, m=None, *, k: int = 10, max_digits: int = MAX_DIGITS) -> ApproxValue:
    """Escalate precision until probes at ``d`` and ``d + 100`` digits agree to ``k`` digits.

    Starts at ``d = max(50, k + 20)`` and steps ``d`` by 100.  A pair that
    agrees but lies outside ``[-10**-k, 1 + 10**-k]`` is not accepted.
    Raises :class:`PrecisionCapExceeded` rather than return an uncertified value.
    """
    p = as_problem(r, n, m)
    k = check_pos_int(k, "k")
    tol = Decimal(10) ** -k
    cache: dict[int, Decimal] = {}

    def probe(d):
        if d not in cache:
            cache[d] = _evaluate(p.r, p.n, p.m, d)
        return cache[d]

    d = max(50, k + 20)
    while d + PROBE_SPACING <= max_digits:
        lo, hi = probe(d), probe(d + PROBE_SPACING)
        agreed = agreed_significant_digits(lo, hi, d)
        if agreed >= k and -tol <= hi <= 1 + tol:
            return ApproxValue(hi, d + PROBE_SPACING, True, agreed)
        logger.debug("r=%d n=%d m=%d: %d digits agree at d=%d", p.r, p.n, p.m, agreed, d)
        d += PROBE_SPACING
    raise PrecisionCapExceeded(
        f"no {k}-digit agreement for {p.to_dict()} below {max_digits} working digits"
    )
