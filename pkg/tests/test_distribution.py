from decimal import Decimal
from fractions import Fraction

import pytest

from occmax import ComputationRefused, max_load_pmf, moments, poisson_max_load_pmf
from occmax.distribution import MaxLoadDistribution, MomentSummary


def test_small_exact_pmfs():
    assert max_load_pmf(2, 2, "exact", 0).as_dict() == {1: Fraction(1, 2), 2: Fraction(1, 2)}
    assert max_load_pmf(3, 2, "exact", 0).as_dict() == {2: Fraction(3, 4), 3: Fraction(1, 4)}


def test_exact_mass_is_one():
    for r in range(13):
        for n in range(1, 7):
            d = max_load_pmf(r, n, "exact", 0)
            assert d.total_mass == 1
            assert sum(p for _, p in d.pmf) == 1


def test_poisson_cumulatives_match_anchors():
    d = max_load_pmf(14400, 9000, "poisson", 1e-8)
    assert abs(d.cdf(7) - Decimal("0.0953959131671")) < Decimal("1e-3")
    assert abs(d.cdf(11) - Decimal("0.998789295")) < Decimal("1e-3")


def test_truncation_bounds_omitted_mass():
    eps = Fraction(1, 10**6)
    d = max_load_pmf(200, 50, "exact", eps)
    assert 1 - d.total_mass <= 2 * eps
    full = max_load_pmf(200, 50, "exact", 0)
    assert len(full.pmf) > len(d.pmf)


def test_reliable_engine_matches_exact():
    a = max_load_pmf(120, 40, "exact", Fraction(1, 10**10)).as_dict()
    b = max_load_pmf(120, 40, "reliable", 1e-10).as_dict()
    assert a.keys() == b.keys()
    for m in a:
        assert abs(Decimal(a[m].numerator) / a[m].denominator - b[m]) < Decimal("1e-18")


def test_engine_agreement_on_sweep_grid():
    # per-point bound from the distribution contract; fails at n=100 (see the notes)
    worst = (Decimal(0), None)
    for R in (Fraction(1, 2), 1, Fraction(8, 5), 2, 3):
        for n in (100, 1000):
            r = int(R * n)
            ex = max_load_pmf(r, n, "exact", Fraction(1, 10**9)).as_dict()
            po = max_load_pmf(r, n, "poisson", 1e-9).as_dict()
            for m in ex.keys() | po.keys():
                p = ex.get(m, Fraction(0))
                diff = abs(Decimal(p.numerator) / p.denominator - po.get(m, Decimal(0)))
                worst = max(worst, (diff, (r, n, m)), key=lambda t: t[0])
    assert worst[0] <= Decimal("0.01"), f"max pointwise |exact - poisson| = {worst[0]:.4f} at {worst[1]}"


def test_exact_means_for_log_fit():
    assert abs(moments(max_load_pmf(300, 300, "exact", Fraction(1, 10**12))).mean - Decimal("4.85555")) < Decimal("1e-5")
    assert abs(moments(max_load_pmf(1000, 1000, "exact", Fraction(1, 10**12))).mean - Decimal("5.51416")) < Decimal("1e-5")


def test_hand_moments():
    s = moments({1: Fraction(1, 2), 2: Fraction(1, 2)})
    assert s.mean == Decimal("1.5") and s.sd == Decimal("0.5")
    s = moments({2: Fraction(3, 4), 3: Fraction(1, 4)})
    assert s.mean == Decimal("2.25")
    assert abs(s.sd - Decimal("0.43301270189221932338186158537646809173570")) < Decimal("1e-38")
    s = moments({5: 1})
    assert s.mean == 5 and s.sd == 0 and s.degenerate


def test_symmetric_skewness_is_zero():
    s = moments({1: Fraction(1, 4), 2: Fraction(1, 2), 3: Fraction(1, 4)}, K=5)
    assert s.skewness == 0
    assert s.alpha_coeffs[2] == 0
    assert abs(s.kurtosis - 2) < Decimal("1e-30")


def test_moments_normalize_truncated_mass():
    a = moments({1: Fraction(1, 4), 2: Fraction(1, 4)})
    b = moments({1: Fraction(1, 2), 2: Fraction(1, 2)})
    assert a == b


def test_poisson_rational_mean_load():
    d = poisson_max_load_pmf(Fraction(8, 5), 9000, 1e-10)
    assert abs(d.cdf(7) - Decimal("0.0959175164730693")) < Decimal("1e-15")
    assert abs(1 - d.total_mass) < Decimal("2e-10")


def test_round_trips():
    for d in (max_load_pmf(9, 4, "exact", 0), max_load_pmf(400, 100, "poisson", 1e-9)):
        assert MaxLoadDistribution.from_dict(d.to_dict()) == d
    s = moments(max_load_pmf(9, 4, "exact", 0), K=4)
    assert MomentSummary.from_dict(s.to_dict()) == s


def test_csv():
    text = max_load_pmf(3, 2, "exact", 0).to_csv()
    assert text.splitlines()[0] == "m,probability"
    assert text.splitlines()[1] == "2,3/4"


def test_refusals_and_errors():
    with pytest.raises(ComputationRefused):
        max_load_pmf(100_000, 100_000, "exact", 0)
    with pytest.raises(ValueError):
        max_load_pmf(10, 5, "poisson", 0)
    with pytest.raises(ValueError):
        max_load_pmf(10, 5, "bogus", 0.1)
    with pytest.raises(ValueError):
        moments({1: 1}, K=1)
