"""Poisson approximation to the occupancy probability and the decision rules built on it.

Each box's load is treated as an independent Poisson variable with mean
``R = r/n``.  All values are ``Decimal`` computed with :data:`POISSON_DIGITS`
significant digits so that tails near ``1e-12`` of quantities near one
survive the subtraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction

from ._validation import as_problem, as_rational, check_confidence, check_nonneg_int, check_pos_int
from .kernel import float_context

POISSON_DIGITS = 50


def _dec(q: Fraction) -> Decimal:
    return Decimal(q.numerator) / Decimal(q.denominator)


def _head_sum(R: Decimal, m: int) -> Decimal:
    term = Decimal(1)
    total = term
    for i in range(1, m + 1):
        term = term * R / i
        total += term
    return total


def _tail_sum(R: Decimal, m: int) -> Decimal:
    # sum_{i > m} R^i / i!, only used when the terms decrease from the start
    term = Decimal(1)
    for i in range(1, m + 2):
        term = term * R / i
    total = term
    i = m + 1
    eps = Decimal(10) ** -(POISSON_DIGITS + 5)
    while term > eps * total:
        i += 1
        term = term * R / i
        total += term
    return total


def poisson_cdf(R, m: int) -> Decimal:
    """``exp(-R) * sum_{i<=m} R**i / i!``."""
    R = as_rational(R)
    m = check_nonneg_int(m, "m")
    with localcontext(float_context(POISSON_DIGITS + 10)):
        if R == 0:
            return Decimal(1)
        x = _dec(R)
        if m + 1 > R:
            out = 1 - (-x).exp() * _tail_sum(x, m)
        else:
            out = (-x).exp() * _head_sum(x, m)
        return +out


def a_priori_tail(R, m: int) -> Decimal:
    """Probability that one named box gets more than ``m`` balls."""
    R = as_rational(R)
    m = check_nonneg_int(m, "m")
    with localcontext(float_context(POISSON_DIGITS + 10)):
        if R == 0:
            return Decimal(0)
        x = _dec(R)
        if m + 1 > R:
            out = (-x).exp() * _tail_sum(x, m)
        else:
            out = 1 - (-x).exp() * _head_sum(x, m)
        return +out


def q_poisson(r, n=None, m=None) -> Decimal:
    """Poisson approximation ``poisson_cdf(r/n, m) ** n`` to the occupancy probability."""
    p = as_problem(r, n, m)
    with localcontext(float_context(POISSON_DIGITS + 10)):
        return poisson_cdf(p.R, p.m) ** p.n


def expected_exceeders(r, n=None, m=None) -> Decimal:
    """Expected number of boxes holding more than ``m`` balls, ``n * a_priori_tail``."""
    p = as_problem(r, n, m)
    with localcontext(float_context(POISSON_DIGITS + 10)):
        return p.n * a_priori_tail(p.R, p.m)


def _conf(conf) -> Decimal:
    check_confidence(conf)
    return Decimal(repr(conf)) if isinstance(conf, float) else Decimal(str(conf))


def smallest_m(r: int, n: int, conf) -> int:
    """Smallest ``m`` with ``q_poisson(r, n, m) >= conf``.

    A box holding at least this many balls is unlikely (at level ``conf``)
    to be explained by chance.  Returns ``r`` when no smaller cap reaches
    the confidence level.
    """
    p = as_problem(r, n, 0)
    c = _conf(conf)
    for m in range(p.r + 1):
        if q_poisson(p.r, p.n, m) >= c:
            return m
    return p.r


def largest_m(r: int, n: int, conf, rule: str = "first-miss") -> int:
    """Threshold below which a sparsely loaded box cannot be blamed on chance.

    With ``T(m) = (1 - poisson_cdf(r/n, m)) ** n``, the probability that every
    box receives more than ``m`` balls:

    * ``rule="strict"``: ``max{m : T(m) >= conf}``, or ``-1`` if ``T(0) < conf``.
    * ``rule="first-miss"`` (default): ``min{m : T(m - 1) < conf}``, the first
      ``m`` at which "every box holds at least ``m``" loses confidence
      (``T(-1) = 1``).  This is ``strict + 2`` and reproduces the published
      thresholds 66 and 57 for ``(10000, 100)``.
    """
    if rule not in ("first-miss", "strict"):
        raise ValueError(f"unknown rule {rule!r}")
    p = as_problem(r, n, 0)
    c = _conf(conf)
    best = -1
    with localcontext(float_context(POISSON_DIGITS + 10)):
        for m in range(p.r + 1):
            if a_priori_tail(p.R, m) ** p.n >= c:
                best = m
            else:
                break
    return best if rule == "strict" else best + 2


@dataclass(frozen=True)
class PoissonQuery:
    """Mean load ``R`` with a cap ``m`` over ``n`` boxes."""

    R: Fraction
    m: int
    n: int = 1

    def __post_init__(self):
        object.__setattr__(self, "R", as_rational(self.R))
        object.__setattr__(self, "m", check_nonneg_int(self.m, "m"))
        object.__setattr__(self, "n", check_pos_int(self.n, "n"))

    def cdf(self) -> Decimal:
        return poisson_cdf(self.R, self.m)

    def tail(self) -> Decimal:
        return a_priori_tail(self.R, self.m)

    def q(self) -> Decimal:
        with localcontext(float_context(POISSON_DIGITS + 10)):
            return self.cdf() ** self.n

    def exceeders(self) -> Decimal:
        with localcontext(float_context(POISSON_DIGITS + 10)):
            return self.n * self.tail()
