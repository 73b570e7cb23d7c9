"""Truncated powers of polynomials with a nonzero constant term.

The fast path is the classical power recurrence: if ``g = f**N`` then
``N * f' * g == f * g'``.  Comparing coefficients of ``x**(k-1)`` gives

    k * f[0] * g[k] = sum_{j=1..deg f} (N*j - k + j) * f[j] * g[k-j]

so each new coefficient costs ``O(deg f)`` domain operations.

Two coefficient domains are supported and share the same code:

* exact: Python/gmpy2 integers or ``fractions.Fraction``.  With integer
  coefficients the division by ``k * f[0]`` is exact and is done with ``//``.
* floating: ``decimal.Decimal`` numbers; every operation rounds to the
  precision of the active decimal context (see :func:`float_context`).
"""

from __future__ import annotations

import decimal
import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ._validation import check_nonneg_int, check_pos_int


@dataclass(frozen=True)
class Polynomial:
    """Dense coefficient list; ``coeffs[i]`` multiplies ``x**i``."""

    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(self.coeffs)
        if not coeffs:
            raise ValueError("a polynomial needs at least one coefficient")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]


class OpCounter:
    """Counts coefficient-domain multiplications performed by the kernel."""

    def __init__(self):
        self.mults = 0

    def __repr__(self):
        return f"OpCounter(mults={self.mults})"


def _as_poly(f) -> Polynomial:
    return f if isinstance(f, Polynomial) else Polynomial(tuple(f))


def _is_integral(coeffs: Sequence) -> bool:
    return all(isinstance(c, numbers.Integral) for c in coeffs)


def truncated_exp_coeffs(m: int) -> Polynomial:
    """Return ``[1/0!, 1/1!, ..., 1/m!]`` as exact fractions."""
    m = check_nonneg_int(m, "m")
    return Polynomial(tuple(Fraction(1, math.factorial(i)) for i in range(m + 1)))


def scaled_exp_coeffs(m: int) -> Polynomial:
    """Integer version of :func:`truncated_exp_coeffs` multiplied through by ``m!``."""
    m = check_nonneg_int(m, "m")
    fm = math.factorial(m)
    return Polynomial(tuple(fm // math.factorial(i) for i in range(m + 1)))


def float_context(digits: int) -> decimal.Context:
    """Decimal context with ``digits`` significant digits and an unbounded exponent range."""
    return decimal.Context(
        prec=digits, Emax=decimal.MAX_EMAX, Emin=decimal.MIN_EMIN, traps=[decimal.InvalidOperation]
    )


def to_float_domain(f, ctx: decimal.Context) -> Polynomial:
    """Round exact coefficients into ``Decimal`` under ``ctx``."""
    out = []
    for c in _as_poly(f):
        if isinstance(c, Fraction):
            out.append(ctx.divide(decimal.Decimal(c.numerator), decimal.Decimal(c.denominator)))
        else:
            out.append(ctx.create_decimal(c))
    return Polynomial(tuple(out))


def miller_power(f, N: int, D: int, counter: OpCounter | None = None) -> Polynomial:
    """Coefficients ``0..D`` of ``f(x)**N`` via the power recurrence.

    Parameters
    ----------
    f : Polynomial or sequence
        Coefficients over one domain (integers, fractions or decimals).
        ``f[0]`` must be nonzero.  Decimal arithmetic follows the active
        context, so wrap the call in ``decimal.localcontext(...)``.
    N : int
        Exponent, ``N >= 1``.
    D : int
        Truncation degree; nothing above ``x**D`` is computed.
    counter : OpCounter, optional
        Incremented by the number of domain multiplications.

    Raises
    ------
    ValueError
        If the constant coefficient is zero.
    """
    f = _as_poly(f)
    N = check_pos_int(N, "N")
    D = check_nonneg_int(D, "D")
    f0 = f[0]
    if f0 == 0:
        raise ValueError("power recurrence needs a nonzero constant coefficient")

    integral = _is_integral(f.coeffs)
    # (j, f[j], N*j + j) for the nonzero higher coefficients
    terms = [(j, c, (N + 1) * j) for j, c in enumerate(f.coeffs) if j and c != 0]

    g = [f0**N]
    mults = 0
    for k in range(1, D + 1):
        s = 0
        for j, fj, w in terms:
            if j > k:
                break
            c = w - k
            if c:
                s += c * fj * g[k - j]
                mults += 2
        if integral:
            q, rem = divmod(s, k * f0)
            if rem:
                raise ArithmeticError("inexact division in integer power recurrence")
            g.append(q)
        else:
            g.append(s / (k * f0))
            mults += 1
    if counter is not None:
        counter.mults += mults
    return Polynomial(tuple(g))


def naive_power(f, N: int, D: int) -> Polynomial:
    """Coefficients ``0..D`` of ``f**N`` by ``N - 1`` truncated multiplications."""
    f = _as_poly(f)
    N = check_pos_int(N, "N")
    D = check_nonneg_int(D, "D")
    base = list(f.coeffs[: D + 1]) + [0] * max(0, D + 1 - len(f))
    acc = list(base)
    for _ in range(N - 1):
        nxt = [0] * (D + 1)
        for i, a in enumerate(acc):
            if a == 0:
                continue
            for j in range(D + 1 - i):
                b = base[j]
                if b != 0:
                    nxt[i + j] += a * b
        acc = nxt
    return Polynomial(tuple(acc))
