from fractions import Fraction

import pytest

from occmax import ComparisonReport, compare_grid, prnm_exact, q_poisson


def test_fixed_range_rows():
    rep = compare_grid([Fraction(1, 2)], [20], (1, 4), 0.01, reference="exact")
    assert [(row["r"], row["n"], row["m"]) for row in rep.rows] == [(10, 20, m) for m in range(1, 5)]
    row = rep.rows[1]
    assert row["reference"] == pytest.approx(float(prnm_exact(10, 20, 2).value), rel=1e-15)
    assert row["poisson"] == pytest.approx(float(q_poisson(10, 20, 2)), rel=1e-15)
    assert rep.max_abs_diff == max(r["abs_diff"] for r in rep.rows)


def test_auto_range_covers_center():
    rep = compare_grid([1], [50], None, 0.01, reference="exact")
    refs = [row["reference"] for row in rep.rows]
    assert min(refs) < 0.001 and max(refs) > 0.999


def test_parallel_order_is_stable():
    a = compare_grid([1, 2], [30, 40], None, 0.01, n_jobs=1)
    b = compare_grid([1, 2], [30, 40], None, 0.01, n_jobs=3)
    assert a.rows == b.rows


def test_serializations():
    rep = compare_grid(["8/5"], [5], (2, 4))
    d = rep.to_dict()
    assert d["grid"]["R_values"] == ["8/5"]
    assert len(rep.to_csv().splitlines()) == 1 + len(rep.rows)
    assert isinstance(rep, ComparisonReport)


def test_non_integer_ball_count():
    with pytest.raises(ValueError):
        compare_grid([Fraction(1, 3)], [10])
