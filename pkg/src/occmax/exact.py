"""Exact rational occupancy probabilities and exact placement counts."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import gmpy2

from ._validation import OccupancyProblem, as_problem
from .kernel import miller_power, scaled_exp_coeffs


def int_to_str(x: int) -> str:
    # gmpy2 sidesteps the interpreter's int/str digit limit
    return str(gmpy2.mpz(x))


def str_to_int(s: str) -> int:
    return int(gmpy2.mpz(s.strip()))


def digit_count(x: int) -> int:
    """Number of decimal digits of ``|x|`` (``0`` has one digit)."""
    return len(int_to_str(abs(x)))


def fraction_to_str(q: Fraction) -> str:
    return f"{int_to_str(q.numerator)}/{int_to_str(q.denominator)}"


def str_to_fraction(s: str) -> Fraction:
    num, _, den = s.partition("/")
    return Fraction(str_to_int(num), str_to_int(den) if den else 1)


def to_decimal(q: Fraction, digits: int = 30) -> str:
    """Render ``q`` with ``digits`` significant digits, truncating toward zero.

    >>> to_decimal(Fraction(1, 3), 5)
    '0.33333'
    >>> to_decimal(Fraction(3, 4), 30)
    '0.750000000000000000000000000000'
    """
    if digits < 1:
        raise ValueError("digits must be >= 1")
    q = Fraction(q)
    sign = "-" if q < 0 else ""
    q = abs(q)
    if q == 0:
        return "0." + "0" * digits if digits > 1 else "0"
    p, d = q.numerator, q.denominator
    # decimal exponent e with 10**e <= q < 10**(e+1)
    e = digit_count(p) - digit_count(d)
    below = p < d * 10**e if e >= 0 else p * 10**-e < d
    if below:
        e -= 1
    shift = digits - 1 - e
    scaled = p * 10**shift // d if shift >= 0 else p // (d * 10**-shift)
    body = str(scaled).rjust(digits, "0")
    if e >= 0:
        head, tail = body[: e + 1], body[e + 1 :]
        if len(head) < e + 1:
            head = head + "0" * (e + 1 - len(head))
    else:
        head, tail = "0", "0" * (-e - 1) + body
    return f"{sign}{head}.{tail}" if tail else f"{sign}{head}"


@dataclass(frozen=True)
class ExactProbability:
    """``value == favorable_count / n**r`` in lowest terms."""

    value: Fraction
    favorable_count: int
    problem: OccupancyProblem

    def decimal(self, digits: int = 30) -> str:
        return to_decimal(self.value, digits)

    def __float__(self):
        return float(self.value)

    def to_dict(self) -> dict:
        return {
            "problem": self.problem.to_dict(),
            "value": fraction_to_str(self.value),
            "favorable_count": int_to_str(self.favorable_count),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExactProbability":
        return cls(
            value=str_to_fraction(data["value"]),
            favorable_count=str_to_int(data["favorable_count"]),
            problem=OccupancyProblem(**data["problem"]),
        )


def count_exact(r, n=None, m=None) -> int:
    """Number of words of length ``r`` over ``n`` letters, no letter used more than ``m`` times.

    This is ``r! [x^r] (sum_{i<=m} x^i/i!)^n``.  The power is taken over the
    integer polynomial ``m! * sum x^i/i!`` so the recurrence never leaves
    the integers, and the ``(m!)^n`` scale is divided out once at the end.
    """
    p = as_problem(r, n, m)
    r, n, m = p.r, p.n, p.m
    if m >= r:
        return n**r
    if n * m < r:
        return 0
    f = [gmpy2.mpz(c) for c in scaled_exp_coeffs(m)]
    g = miller_power(f, n, r)
    num = gmpy2.fac(r) * g[r]
    count, rem = gmpy2.f_divmod(num, gmpy2.mpz(math.factorial(m)) ** n)
    assert rem == 0
    return int(count)


def prnm_exact(r, n=None, m=None) -> ExactProbability:
    """Exact probability that no box receives more than ``m`` of ``r`` balls in ``n`` boxes.

    Accepts either an :class:`OccupancyProblem` or the three integers.

    >>> prnm_exact(3, 2, 2).value
    Fraction(3, 4)
    """
    p = as_problem(r, n, m)
    count = count_exact(p)
    return ExactProbability(Fraction(count, p.n**p.r), count, p)


def b_count(a: int, b: int, m: int, n: int) -> int:
    """Placements of ``a*n`` balls into ``b*n`` boxes with no box above ``m``."""
    return count_exact(a * n, b * n, m)
