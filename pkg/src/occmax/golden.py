"""Published reference values and the checks that reproduce them.

Used by ``occmax verify-paper``.  Each check returns a :class:`GoldenResult`;
the command exits non-zero unless every selected check passes.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction

from .asymptotics import asy_estimate, empirical_growth, expectation_log_fit
from .compare import compare_grid
from .distribution import max_load_pmf
from .exact import count_exact, digit_count, prnm_exact
from .floatprec import agreed_significant_digits, prnm_float, prnm_reliable
from .kernel import miller_power, naive_power
from .oracle import brute_force_prob, enumerate_placements_prob, monte_carlo
from .poisson import a_priori_tail, expected_exceeders, largest_m, q_poisson, smallest_m

P_14400_9000_7 = "0.0953959131671303999971555481626"
P_8000_12000_11 = "0.999999895529647647310726013392"
ASY_1800 = {
    7: "0.09540287131",
    8: "0.664971462304",
    9: "0.9378712268719",
    10: "0.990845139",
    11: "0.998789295",
}
ASY_180000_M11 = "0.88554890636027"
FIT_ANCHORS = {(1, 1): (2.2939, 0.4736), (2, 1): (3.9634, 0.5834), (1, 2): (1.6401, 0.3874)}
SWEEP_R = (Fraction(1, 2), 1, Fraction(8, 5), 2, 3)
SWEEP_N = (100, 1000)


@dataclass(frozen=True)
class GoldenResult:
    key: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.key:<28} {self.detail}  ({self.seconds:.2f}s)"


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def _rel_close(value, target, rel) -> bool:
    value, target = Decimal(value), Decimal(target)
    return abs(value - target) <= Decimal(repr(rel)) * abs(target)


def check_exact_golden():
    out = []
    for key, (r, n, m), golden in (
        ("1.exact_14400_9000_7", (14400, 9000, 7), P_14400_9000_7),
        ("1.exact_8000_12000_11", (8000, 12000, 11), P_8000_12000_11),
    ):
        p, dt = _timed(lambda: prnm_exact(r, n, m))
        got = p.decimal(30)
        ok = got == golden and dt <= 180
        out.append(GoldenResult(key, ok, f"got {got} want {golden}", dt))
    return out


def check_exact_sizes():
    p, dt = _timed(lambda: prnm_exact(14400, 9000, 7))
    nd, dd = digit_count(p.value.numerator), digit_count(p.value.denominator)
    res = [GoldenResult("2.numerator_digits", nd == 54207, f"numerator {nd} digits (denominator {dd})", dt)]
    c, dt = _timed(lambda: count_exact(1001, 1001, 7))
    cd = digit_count(c)
    res.append(GoldenResult("2.count_1001_digits", cd == 3004 and dt <= 10, f"{cd} digits", dt))
    return res


def check_poisson_anchors():
    res = []
    t0 = time.perf_counter()
    v = a_priori_tail(Fraction(8, 5), 7)
    res.append(GoldenResult("3.tail_8/5_7", abs(v - Decimal("0.00026044")) <= Decimal("1e-8"), f"{v:.8e}"))
    v = a_priori_tail(Fraction(2, 3), 11)
    res.append(GoldenResult("3.tail_2/3_11", _rel_close(v, "8.70586315e-12", 1e-6), f"{v:.9e}"))
    v = expected_exceeders(14400, 9000, 7)
    res.append(GoldenResult("3.exceeders_14400_9000_7", _rel_close(v, "2.343961376410372", 1e-12), f"{v:.16f}"))
    v = expected_exceeders(8000, 12000, 12)
    res.append(GoldenResult("3.exceeders_8000_12000_12", _rel_close(v, "5.33706802e-9", 1e-6), f"{v:.9e}"))
    c = count_exact(1001, 1001, 7)
    ratio = q_poisson(1001, 1001, 7) * Decimal(1001) ** 1001 / Decimal(c)
    res.append(GoldenResult("3.coda_ratio", abs(ratio - Decimal("0.9997852")) <= Decimal("1e-5"),
                            f"{ratio:.9f}", time.perf_counter() - t0))
    return res


def check_thresholds():
    cases = [
        ("smallest_m", smallest_m, 14400, 9000, 0.99, 10),
        ("smallest_m", smallest_m, 14400, 9000, 0.9999, 13),
        ("smallest_m", smallest_m, 10000, 100, 0.99, 139),
        ("smallest_m", smallest_m, 10000, 100, 0.9999, 151),
        ("largest_m", largest_m, 10000, 100, 0.99, 66),
        ("largest_m", largest_m, 10000, 100, 0.9999, 57),
    ]
    res = []
    for name, fn, r, n, conf, want in cases:
        got, dt = _timed(lambda: fn(r, n, conf))
        res.append(GoldenResult(f"4.{name}_{r}_{n}_{conf}", got == want, f"got {got} want {want}", dt))
    return res


def check_asymptotics():
    res = []
    for m, golden in ASY_1800.items():
        g, dt = _timed(lambda: empirical_growth(8, 5, m, 200))
        v = asy_estimate(g, 1800)
        agreed = agreed_significant_digits(v, Decimal(golden), 30)
        res.append(GoldenResult(f"5.asy_1800_m{m}", agreed >= 6, f"{v:.12f} vs {golden} ({agreed} digits)", dt))
    g, dt = _timed(lambda: empirical_growth(8, 5, 11, 200))
    v = asy_estimate(g, 180000)
    agreed = agreed_significant_digits(v, Decimal(ASY_180000_M11), 30)
    res.append(GoldenResult("5.asy_180000_m11", agreed >= 8, f"{v:.14f} vs {ASY_180000_M11} ({agreed} digits)", dt))
    return res


def check_instability():
    v, dt = _timed(lambda: prnm_float(1000, 100, 15, digits=30))
    res = [GoldenResult("6.float_30_negative", v.value < 0, f"value {v.value:.6e}", dt)]
    rel, dt = _timed(lambda: prnm_reliable(1000, 100, 15, k=10))
    exact = prnm_exact(1000, 100, 15).value
    ex = Decimal(exact.numerator) / Decimal(exact.denominator)
    agreed = agreed_significant_digits(rel.value, ex, 50)
    ok = rel.reliable and 0 <= rel.value <= 1 and agreed >= 10
    res.append(GoldenResult("6.reliable_matches_exact", ok,
                            f"{rel.decimal(15)} at {rel.precision_digits} digits, {agreed} digits agree", dt))
    return res


def check_oracles():
    t0 = time.perf_counter()
    bad = [
        (r, n, m)
        for r in range(9) for n in range(1, 6) for m in range(r + 1)
        if not prnm_exact(r, n, m).value == brute_force_prob(r, n, m) == enumerate_placements_prob(r, n, m)
    ]
    res = [GoldenResult("7.three_engines_agree", not bad, f"{len(bad)} mismatches", time.perf_counter() - t0)]

    t0 = time.perf_counter()
    rng = random.Random(20080406)
    pool = [Fraction(x) for x in (-3, -2, -1, 1, 2, 3)] + [Fraction(1, 2), Fraction(-1, 3), Fraction(5, 7)]
    mism = 0
    for _ in range(200):
        deg = rng.randint(0, 6)
        f = [rng.choice(pool)] + [rng.choice(pool + [Fraction(0)]) for _ in range(deg)]
        N, D = rng.randint(1, 8), rng.randint(0, 12)
        mism += miller_power(f, N, D) != naive_power(f, N, D)
    res.append(GoldenResult("7.miller_equals_naive", mism == 0, f"{mism}/200 mismatches", time.perf_counter() - t0))

    t0 = time.perf_counter()
    off = [(r, n) for r in range(13) for n in range(1, 7) if max_load_pmf(r, n, "exact", 0).total_mass != 1]
    res.append(GoldenResult("7.pmf_sums_to_one", not off, f"{len(off)} failures", time.perf_counter() - t0))
    return res


def check_fits(n_jobs=None):
    res = []
    for (a, b), (c0, c1) in FIT_ANCHORS.items():
        fit, dt = _timed(lambda: expectation_log_fit(a, b, 300, 1000, 10, 1, "poisson", n_jobs=n_jobs))
        b0, b1 = (float(c) for c in fit.coefficients)
        ok = abs(b0 - c0) <= 0.05 and abs(b1 - c1) <= 0.05
        res.append(GoldenResult(f"8.fit_a{a}_b{b}", ok, f"({b0:.4f}, {b1:.4f}) vs ({c0}, {c1})", dt))
    return res


def check_sweep(n_jobs=None):
    rep, dt = _timed(lambda: compare_grid(SWEEP_R, SWEEP_N, None, 0.01, n_jobs=n_jobs))
    worst = rep.max_abs_diff_within_center
    res = [GoldenResult("9.poisson_fitness", worst <= 0.01, f"max center |Q-P| = {worst:.4f}", dt)]
    t_exact = min(_timed(lambda: prnm_exact(14400, 9000, m))[1] for m in (7, 9, 11))
    t_pois = min(_timed(lambda: q_poisson(14400, 9000, m))[1] for m in (7, 9, 11))
    ratio = t_exact / t_pois
    res.append(GoldenResult("9.poisson_speedup", ratio >= 100, f"{ratio:.0f}x faster", t_exact + t_pois))
    return res


def check_monte_carlo():
    a, dt = _timed(lambda: monte_carlo(14400, 9000, 7, trials=10_000, seed=2008))
    b = monte_carlo(14400, 9000, 7, trials=10_000, seed=2008)
    z = (a.estimate - 0.09539591) / a.stderr
    return [
        GoldenResult("10.mc_within_5se", abs(z) <= 5, f"{a.estimate} ({z:+.2f} se)", dt),
        GoldenResult("10.mc_deterministic", a == b, "same seed, same estimate"),
    ]


CHECKS = {
    "1": check_exact_golden,
    "2": check_exact_sizes,
    "3": check_poisson_anchors,
    "4": check_thresholds,
    "5": check_asymptotics,
    "6": check_instability,
    "7": check_oracles,
    "8": check_fits,
    "9": check_sweep,
    "10": check_monte_carlo,
}


def run_checks(only=None, n_jobs=None):
    """Yield results of every check group (or only the groups listed in ``only``)."""
    for key, fn in CHECKS.items():
        if only and key not in only:
            continue
        if fn in (check_fits, check_sweep):
            yield from fn(n_jobs=n_jobs)
        else:
            yield from fn()
