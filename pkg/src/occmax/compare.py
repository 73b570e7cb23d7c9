"""Side-by-side comparison of the Poisson approximation against a reference engine."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction

from joblib import Parallel, delayed

from ._validation import as_rational
from .exact import prnm_exact
from .floatprec import prnm_reliable
from .poisson import q_poisson

ROW_FIELDS = ("r", "n", "m", "reference", "poisson", "abs_diff", "rel_diff")


def _reference(r, n, m, engine, k):
    if engine == "exact":
        v = prnm_exact(r, n, m).value
        return Decimal(v.numerator) / Decimal(v.denominator)
    return prnm_reliable(r, n, m, k=k).value


def _row(r, n, m, engine, k):
    ref = _reference(r, n, m, engine, k)
    q = q_poisson(r, n, m)
    diff = abs(q - ref)
    rel = diff / ref if ref else Decimal("Infinity")
    return {"r": r, "n": n, "m": m, "reference": float(ref), "poisson": float(q),
            "abs_diff": float(diff), "rel_diff": float(rel)}


@dataclass
class ComparisonReport:
    R_values: list
    n_values: list
    m_range: tuple | None
    eps: float
    reference_engine: str
    rows: list = field(default_factory=list)

    def _center(self):
        return [row for row in self.rows if self.eps <= row["reference"] <= 1 - self.eps]

    @property
    def max_abs_diff(self) -> float:
        return max((row["abs_diff"] for row in self.rows), default=0.0)

    @property
    def max_abs_diff_within_center(self) -> float:
        return max((row["abs_diff"] for row in self._center()), default=0.0)

    @property
    def max_rel_diff_within_center(self) -> float:
        return max((row["rel_diff"] for row in self._center()), default=0.0)

    def to_dict(self) -> dict:
        return {
            "grid": {
                "R_values": [str(R) for R in self.R_values],
                "n_values": list(self.n_values),
                "m_range": list(self.m_range) if self.m_range else None,
                "eps": repr(self.eps),
                "reference_engine": self.reference_engine,
            },
            "rows": [{k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()} for row in self.rows],
            "max_abs_diff": repr(self.max_abs_diff),
            "max_abs_diff_within_center": repr(self.max_abs_diff_within_center),
            "max_rel_diff_within_center": repr(self.max_rel_diff_within_center),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=ROW_FIELDS, lineterminator="\n")
        w.writeheader()
        for row in self.rows:
            w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
        return buf.getvalue()


def _auto_m_values(r, n, eps, engine, k):
    # walk outward from the mean load until the reference leaves [eps/10, 1 - eps/10]
    lo_cut, hi_cut = eps / 10, 1 - eps / 10
    m0 = max(math.ceil(r / n), 1 if r else 0)
    ms = []
    m = m0
    while True:
        if n * m >= r:
            ms.append(m)
            if float(_reference(r, n, m, engine, k)) > hi_cut or m >= r:
                break
        m += 1
    m = m0 - 1
    while m >= 0 and n * m >= r:
        ms.append(m)
        if float(_reference(r, n, m, engine, k)) < lo_cut:
            break
        m -= 1
    return sorted(ms)


def compare_grid(R_values, n_values, m_range=None, eps=0.01, *, reference="reliable", k=12, n_jobs=None) -> ComparisonReport:
    """Tabulate ``q_poisson`` against ``reference`` over every ``(R, n, m)`` in the grid.

    ``m_range=(lo, hi)`` fixes the caps; ``None`` walks outward from the mean
    load until the reference probability leaves ``[eps/10, 1 - eps/10]``.
    Rows come back sorted by ``(R, n, m)`` regardless of ``n_jobs``.
    """
    if reference not in ("reliable", "exact"):
        raise ValueError("reference must be 'reliable' or 'exact'")
    Rs = [as_rational(R) for R in R_values]
    jobs = []
    for R in Rs:
        for n in n_values:
            r = R * n
            if r.denominator != 1:
                raise ValueError(f"R={R} times n={n} is not a whole number of balls")
            r = int(r)
            ms = range(m_range[0], m_range[1] + 1) if m_range else _auto_m_values(r, n, eps, reference, k)
            jobs.extend((r, n, m) for m in ms)
    if n_jobs is None or n_jobs == 1:
        rows = [_row(r, n, m, reference, k) for r, n, m in jobs]
    else:
        rows = Parallel(n_jobs=n_jobs)(delayed(_row)(r, n, m, reference, k) for r, n, m in jobs)
    return ComparisonReport(Rs, list(n_values), tuple(m_range) if m_range else None, eps, reference, rows)
