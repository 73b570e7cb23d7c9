from decimal import Decimal

import pytest
from hypothesis import given, settings, strategies as st

from occmax import PrecisionCapExceeded, prnm_exact, prnm_float, prnm_reliable
from occmax.floatprec import ApproxValue, agreed_significant_digits


def _dec(q):
    return Decimal(q.numerator) / Decimal(q.denominator)


def test_stable_case():
    v = prnm_float(14400, 9000, 9, digits=30)
    assert abs(v.value - Decimal("0.937864339305858")) < Decimal("1e-15")
    assert not v.reliable


def test_unstable_case_is_surfaced():
    v = prnm_float(1000, 100, 15, digits=30)
    assert v.value < 0
    assert abs(v.value) > Decimal("1e40")


def test_trivial_case():
    assert abs(prnm_float(3, 2, 3, digits=20).value - 1) < Decimal("1e-18")


def test_reliable_escapes_instability():
    v = prnm_reliable(1000, 100, 15, k=10)
    assert v.reliable and 0 <= v.value <= 1
    assert v.precision_digits > 90
    assert agreed_significant_digits(v.value, _dec(prnm_exact(1000, 100, 15).value), 40) >= 10


def test_reliable_needs_more_than_250_digits():
    v = prnm_reliable(10000, 1000, 22, k=10)
    assert v.reliable and v.precision_digits > 250
    assert abs(v.value - Decimal("0.745153717628828")) < Decimal("1e-14")


def test_reliable_small():
    assert prnm_reliable(2, 2, 1, k=10).value == Decimal("0.5")


@settings(max_examples=120, deadline=None)
@given(r=st.integers(0, 50), n=st.integers(1, 20), data=st.data())
def test_reliable_matches_exact(r, n, data):
    m = data.draw(st.integers(0, r))
    v = prnm_reliable(r, n, m, k=15)
    exact = _dec(prnm_exact(r, n, m).value)
    assert v.reliable
    assert -Decimal("1e-15") <= v.value <= 1 + Decimal("1e-15")
    if exact == 0:
        assert v.value == 0
    else:
        assert agreed_significant_digits(v.value, exact, 40) >= 12


def test_precision_cap():
    with pytest.raises(PrecisionCapExceeded):
        prnm_reliable(1000, 100, 15, k=10, max_digits=200)


def test_agreement_is_relative():
    tiny = Decimal("1.234567890123e-40")
    assert agreed_significant_digits(tiny, tiny * (1 + Decimal("1e-11")), 30) >= 10
    assert agreed_significant_digits(Decimal(1), Decimal(2), 30) == 1
    assert agreed_significant_digits(Decimal(1), Decimal(-1), 30) == 0
    assert agreed_significant_digits(Decimal(0), Decimal(0), 30) == 30


def test_round_trip():
    v = prnm_reliable(30, 5, 9, k=12)
    assert ApproxValue.from_dict(v.to_dict()) == v


def test_minimum_digits():
    with pytest.raises(ValueError):
        prnm_float(5, 2, 3, digits=5)
