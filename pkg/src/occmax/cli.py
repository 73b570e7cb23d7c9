"""Command-line interface: ``occmax <command> ...``.

Exit status is 0 on success, 2 for invalid arguments and 3 when an engine
refuses a job (oracle size bound, precision cap, exact-cost bound).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from decimal import Decimal
from fractions import Fraction

from . import __version__
from ._validation import ComputationRefused, as_rational, default_n_jobs
from .asymptotics import asy_estimate, empirical_growth, expectation_log_fit, poisson_moment_fits
from .compare import compare_grid
from .distribution import max_load_pmf, moments
from .exact import count_exact, fraction_to_str, int_to_str, prnm_exact
from .floatprec import prnm_float, prnm_reliable
from .golden import run_checks
from .oracle import monte_carlo
from .poisson import a_priori_tail, expected_exceeders, largest_m, poisson_cdf, q_poisson, smallest_m

EXIT_USAGE = 2
EXIT_REFUSED = 3
DISPLAY_DIGITS = 30


class UsageError(Exception):
    pass


def _emit(args, payload, text):
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def _fmt(v: Decimal, digits=DISPLAY_DIGITS) -> str:
    return format(+v.normalize() if v == 0 else v, f".{digits}g") if isinstance(v, Decimal) else str(v)


def cmd_exact(args):
    p = prnm_exact(args.r, args.n, args.m)
    text = p.decimal(args.digits) if args.digits else fraction_to_str(p.value)
    _emit(args, p.to_dict(), text)


def cmd_count(args):
    c = count_exact(args.r, args.n, args.m)
    _emit(args, {"problem": {"r": args.r, "n": args.n, "m": args.m}, "count": int_to_str(c)}, int_to_str(c))


def cmd_float(args):
    v = prnm_float(args.r, args.n, args.m, digits=args.digits)
    _emit(args, v.to_dict(), v.decimal())


def cmd_reliable(args):
    v = prnm_reliable(args.r, args.n, args.m, k=args.k, max_digits=args.max_digits)
    _emit(args, v.to_dict(), f"{v.decimal(max(args.k, 1))}  (reliable to {v.agreed_digits} digits at {v.precision_digits})")


def cmd_poisson(args):
    vals = args.values
    if args.kind in ("cdf", "tail"):
        if len(vals) != 2:
            raise UsageError(f"poisson {args.kind} takes R m")
        R, m = as_rational(vals[0]), int(vals[1])
        v = poisson_cdf(R, m) if args.kind == "cdf" else a_priori_tail(R, m)
        payload = {"kind": args.kind, "R": str(R), "m": m, "value": str(v)}
    else:
        if len(vals) != 3:
            raise UsageError(f"poisson {args.kind} takes r n m")
        r, n, m = (int(x) for x in vals)
        v = q_poisson(r, n, m) if args.kind == "q" else expected_exceeders(r, n, m)
        payload = {"kind": args.kind, "r": r, "n": n, "m": m, "value": str(v)}
    _emit(args, payload, _fmt(v))


def cmd_smallest_m(args):
    m = smallest_m(args.r, args.n, args.conf)
    _emit(args, {"r": args.r, "n": args.n, "conf": args.conf, "m": m}, str(m))


def cmd_largest_m(args):
    m = largest_m(args.r, args.n, args.conf, rule=args.rule)
    _emit(args, {"r": args.r, "n": args.n, "conf": args.conf, "rule": args.rule, "m": m}, str(m))


def _dist(args):
    eps = Fraction(args.eps) if args.engine == "exact" else float(args.eps)
    return max_load_pmf(args.r, args.n, args.engine, eps)


def cmd_dist(args):
    d = _dist(args)
    if args.csv:
        sys.stdout.write(d.to_csv())
        return
    rows = "\n".join(f"{m:>5}  {_fmt(Decimal(p.numerator) / Decimal(p.denominator) if isinstance(p, Fraction) else p, 16)}"
                     for m, p in d.pmf)
    _emit(args, d.to_dict(), f"{'m':>5}  probability\n{rows}")


def cmd_moments(args):
    s = moments(_dist(args), args.K)
    alphas = "  ".join(f"a{k}={_fmt(a, 12)}" for k, a in enumerate(s.alpha_coeffs, start=3))
    text = f"mean={_fmt(s.mean, 16)}  sd={_fmt(s.sd, 16)}" + (f"  {alphas}" if alphas else "")
    if s.degenerate:
        text += "  (degenerate)"
    _emit(args, s.to_dict(), text)


def cmd_asy(args):
    g = empirical_growth(args.a, args.b, args.m, args.N, k=args.k)
    at = args.at or [args.N]
    values = {n: asy_estimate(g, n) for n in at}
    payload = {"estimate": g.to_dict(), "values": {str(n): str(v) for n, v in values.items()}}
    text = f"mu={_fmt(g.mu, 20)}  c0={_fmt(g.c0, 20)}\n" + "\n".join(f"n={n}: {_fmt(v, 20)}" for n, v in values.items())
    _emit(args, payload, text)


def _fit_text(label, fit):
    coeffs = " + ".join(f"{_fmt(c, 10)}*ln(n)^{j}" if j else _fmt(c, 10) for j, c in enumerate(fit.coefficients))
    return f"{label}: {coeffs}   (rms {fit.residual:.3g})"


def cmd_fit_expectation(args):
    n0, n1, step = args.range
    fit = expectation_log_fit(args.a, args.b, n0, n1, step, args.d, args.engine, n_jobs=args.threads)
    _emit(args, fit.to_dict(), _fit_text("mean", fit))


def cmd_fit_moments(args):
    n0, n1, step = args.range
    fits = poisson_moment_fits(args.R, n0, n1, step, args.d, args.K, n_jobs=args.threads)
    labels = ["mean", "sd"] + [f"alpha{k}" for k in range(3, args.K + 1)]
    _emit(args, [dict(f.to_dict(), statistic=l) for l, f in zip(labels, fits)],
          "\n".join(_fit_text(l, f) for l, f in zip(labels, fits)))


def cmd_mc(args):
    res = monte_carlo(args.r, args.n, args.m, trials=args.trials, seed=args.seed, n_jobs=args.threads)
    _emit(args, res.to_dict(), f"{res.estimate!r} +- {res.stderr:.3g}  ({res.trials} trials, seed {res.seed})")


def cmd_compare(args):
    rep = compare_grid(args.R_list, args.n_list, tuple(args.m_range) if args.m_range else None, args.eps,
                       reference=args.reference, n_jobs=args.threads)
    if args.csv:
        sys.stdout.write(rep.to_csv())
        return
    lines = [f"{'r':>7} {'n':>7} {'m':>4} {'reference':>22} {'poisson':>22} {'abs_diff':>10}"]
    for row in rep.rows:
        lines.append(f"{row['r']:>7} {row['n']:>7} {row['m']:>4} {row['reference']:>22.15g} "
                     f"{row['poisson']:>22.15g} {row['abs_diff']:>10.3g}")
    lines.append(f"max |diff| = {rep.max_abs_diff:.4g}; within [{args.eps}, {1 - args.eps}]: "
                 f"{rep.max_abs_diff_within_center:.4g} (max rel {rep.max_rel_diff_within_center:.4g})")
    _emit(args, rep.to_dict(), "\n".join(lines))


def cmd_verify_paper(args):
    results = []
    for res in run_checks(only=set(args.only) if args.only else None, n_jobs=args.threads):
        results.append(res)
        if not args.json:
            print(res.line(), flush=True)
    failed = sum(not r.passed for r in results)
    if args.json:
        print(json.dumps({"checks": [{"key": r.key, "passed": r.passed, "detail": r.detail,
                                      "seconds": round(r.seconds, 3)} for r in results],
                          "failed": failed}, indent=2))
    else:
        print(f"{len(results) - failed}/{len(results)} checks passed")
    return 1 if failed else 0


def _rational_arg(s):
    try:
        return as_rational(s)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _conf_arg(s):
    v = float(s)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError("confidence must lie strictly between 0 and 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit machine-readable JSON")
    common.add_argument("--threads", type=int, default=None,
                        help="worker count for sweeps (default: $OCCMAX_THREADS or CPU count)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="occmax", parents=[common],
                                     description="Exact and approximate maximum-load probabilities for balls in boxes.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
        return p

    def rnm(p):
        p.add_argument("r", type=int, help="balls")
        p.add_argument("n", type=int, help="boxes")
        p.add_argument("m", type=int, help="per-box cap")

    p = add("exact", cmd_exact, "exact rational P(r,n,m)")
    rnm(p)
    p.add_argument("--digits", type=int, default=None, help="print this many significant digits instead of p/q")

    rnm(add("count", cmd_count, "number of placements with no box above m"))

    p = add("float", cmd_float, "P(r,n,m) at a fixed working precision")
    rnm(p)
    p.add_argument("--digits", type=int, default=DISPLAY_DIGITS)

    p = add("reliable", cmd_reliable, "P(r,n,m) with adaptive precision")
    rnm(p)
    p.add_argument("-k", type=int, default=10, help="significant digits required")
    p.add_argument("--max-digits", type=int, default=5000)

    p = add("poisson", cmd_poisson, "Poisson approximation quantities")
    p.add_argument("kind", choices=["cdf", "q", "tail", "exceeders"])
    p.add_argument("values", nargs="+", help="cdf/tail: R m; q/exceeders: r n m")

    for name, func in (("smallest-m", cmd_smallest_m), ("largest-m", cmd_largest_m)):
        p = add(name, func, f"{name.replace('-', ' ')} confidence threshold")
        p.add_argument("r", type=int)
        p.add_argument("n", type=int)
        p.add_argument("--conf", type=_conf_arg, required=True)
        if name == "largest-m":
            p.add_argument("--rule", choices=["first-miss", "strict"], default="first-miss")

    for name, func in (("dist", cmd_dist), ("moments", cmd_moments)):
        p = add(name, func, "maximum-load pmf" if name == "dist" else "moments of the maximum load")
        p.add_argument("r", type=int)
        p.add_argument("n", type=int)
        p.add_argument("--engine", choices=["exact", "reliable", "poisson"], default="exact")
        p.add_argument("--eps", default="0", help="per-side truncation bound")
        if name == "dist":
            p.add_argument("--csv", action="store_true")
        else:
            p.add_argument("-K", type=int, default=4, help="highest standardized moment")

    p = add("asy", cmd_asy, "empirical growth estimate c0*mu^n for P(a n, b n, m)")
    p.add_argument("a", type=int)
    p.add_argument("b", type=int)
    p.add_argument("m", type=int)
    p.add_argument("-N", type=int, default=200, help="anchor index")
    p.add_argument("-k", type=int, default=20, help="digits for the anchor terms")
    p.add_argument("--at", type=int, action="append", help="evaluate at this n (repeatable)")

    p = add("fit-expectation", cmd_fit_expectation, "fit E[max load] as a polynomial in ln n")
    p.add_argument("a", type=int)
    p.add_argument("b", type=int)
    p.add_argument("--range", type=int, nargs=3, metavar=("N0", "N1", "STEP"), default=[300, 1000, 10])
    p.add_argument("-d", type=int, default=1)
    p.add_argument("--engine", choices=["reliable", "poisson"], default="poisson")

    p = add("fit-moments", cmd_fit_moments, "fit Poisson-model moments as polynomials in ln n")
    p.add_argument("R", type=_rational_arg)
    p.add_argument("--range", type=int, nargs=3, metavar=("N0", "N1", "STEP"), default=[300, 1000, 10])
    p.add_argument("-d", type=int, default=1)
    p.add_argument("-K", type=int, default=4)

    p = add("mc", cmd_mc, "Monte Carlo estimate")
    rnm(p)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)

    p = add("compare", cmd_compare, "Poisson approximation versus a reference engine over a grid")
    p.add_argument("--R-list", type=_rational_arg, nargs="+", required=True)
    p.add_argument("--n-list", type=int, nargs="+", required=True)
    p.add_argument("--m-range", type=int, nargs=2, metavar=("LO", "HI"), default=None)
    p.add_argument("--eps", type=float, default=0.01)
    p.add_argument("--reference", choices=["reliable", "exact"], default="reliable")
    p.add_argument("--csv", action="store_true")

    p = add("verify-paper", cmd_verify_paper, "reproduce the published reference values")
    p.add_argument("--only", nargs="+", metavar="GROUP", help="check groups to run (1-10)")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.threads is None:
        args.threads = default_n_jobs()
    try:
        status = args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"occmax: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ComputationRefused as exc:
        print(f"occmax: refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except (ValueError, TypeError, ArithmeticError) as exc:
        print(f"occmax: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return status or 0


if __name__ == "__main__":
    sys.exit(main())
