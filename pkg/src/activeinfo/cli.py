"""Command-line front end.

Exit codes: 0 success (or test not rejected), 1 test rejected or a Monte Carlo
check failed, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .dists import (
    CriticalMode,
    cdf_one_sided,
    cdf_two_sided,
    critical_one_sided,
    critical_two_sided,
    parse_reference,
    tail_one_sided,
    tail_two_sided,
)
from .engine import Sidedness, TestSpec, run_test
from .errors import DomainError
from .gof import Discrete, Grid, gof_statistic, read_pair_csv, read_pair_files
from .oracle import (
    DiscreteDist,
    conservation_bound_check,
    empirical_cdf,
    empirical_critical,
    null_rejection_rate,
    quantile_std_error,
    read_column,
)
from .priors import Uniform01, parse_prior, prior_pdf
from .tables import PRESETS, TableSpec, format_number, generate_table
from .units import NATS, InfoValue, parse_unit

EXIT_OK, EXIT_REJECT, EXIT_USAGE = 0, 1, 2


def _type(fn):
    def wrapped(text):
        try:
            return fn(text)
        except (DomainError, ValueError) as e:
            raise argparse.ArgumentTypeError(str(e)) from None

    wrapped.__name__ = fn.__name__
    return wrapped


@_type
def _alpha(text):
    a = float(text)
    if not 0.0 < a < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {text}")
    return a


@_type
def _prob(text):
    p = float(text)
    if not 0.0 < p <= 1.0:
        raise DomainError(f"probability must lie in (0, 1], got {text}")
    return p


@_type
def _finite(text):
    x = float(text)
    if math.isnan(x):
        raise DomainError("NaN is not allowed")
    return x


@_type
def _positive_int(text):
    n = int(text)
    if n < 1:
        raise DomainError(f"expected a positive integer, got {text}")
    return n


@_type
def _units(text):
    return tuple(parse_unit(u) for u in text.split(",") if u.strip())


@_type
def _float_list(text):
    return tuple(float(x) for x in text.split(",") if x.strip())


_ref = _type(parse_reference)
_prior = _type(parse_prior)
_unit = _type(parse_unit)


def _add_model_flags(p, sided_default="one"):
    p.add_argument("--sided", choices=["one", "two"], default=sided_default)
    p.add_argument("--ref", type=_ref, default=parse_reference("uniform:2"),
                   help="uniform:N or event:q (default uniform:2)")
    p.add_argument("--prior", type=_prior, default=Uniform01(),
                   help="uniform, beta:a,b, empirical:path.json or inline JSON")
    p.add_argument("--mode", choices=["exact", "paper-table"], default="exact")
    p.add_argument("--raw", action="store_true", help="print full precision")
    p.add_argument("--rounding", choices=["half-even", "down"], default="half-even",
                   help="rounding of printed values; 'down' truncates like the published tables")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="activeinfo", description="Exact tests for active information."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("critical", help="critical value for a level alpha")
    p.add_argument("--alpha", type=_alpha, required=True)
    p.add_argument("--unit", type=_units, default=(NATS,), help="comma-separated units")
    _add_model_flags(p)

    p = sub.add_parser("test", help="test an observed probability; prints JSON")
    p.add_argument("--p-obs", type=_prob, required=True)
    p.add_argument("--alpha", type=_alpha, required=True)
    p.add_argument("--unit", type=_unit, default=NATS)
    _add_model_flags(p)

    p = sub.add_parser("table", help="rejection-region table")
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--alphas", type=_float_list)
    p.add_argument("--units", type=_units)
    p.add_argument("--format", choices=["csv", "markdown"])
    p.add_argument("--precision", type=_positive_int)
    _add_model_flags(p)

    p = sub.add_parser("cdf", help="exact CDF (or tail) of the statistic")
    p.add_argument("--x", type=_finite, required=True, help="threshold in --unit")
    p.add_argument("--unit", type=_unit, default=NATS)
    p.add_argument("--tail", action="store_true", help="print P[stat > x] instead")
    _add_model_flags(p)

    p = sub.add_parser("gof", help="goodness-of-fit statistic")
    p.add_argument("--p", help="file with one value per line")
    p.add_argument("--q", help="file with one value per line")
    p.add_argument("--csv", help="two-column p,q file")
    p.add_argument("--step", type=_finite, help="grid spacing; treats inputs as densities")
    p.add_argument("--unit", type=_unit, default=NATS)
    p.add_argument("--raw", action="store_true")
    p.add_argument("--rounding", choices=["half-even", "down"], default="half-even")

    p = sub.add_parser("mc-check", help="Monte Carlo cross-check of a closed form")
    p.add_argument("--target", choices=["cdf", "tail", "critical", "size", "conservation"],
                   required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--samples", type=_positive_int, required=True)
    p.add_argument("--threshold", type=_finite, help="threshold in --unit (cdf/tail)")
    p.add_argument("--unit", type=_unit, default=NATS)
    p.add_argument("--alpha", type=_alpha)
    p.add_argument("--p", help="conservation: distribution file, one probability per line")
    p.add_argument("--v", help="conservation: specification values, one per line")
    p.add_argument("--r", type=_finite, help="conservation: bound on the total of v")
    p.add_argument("--x", type=_float_list, default=(0.0, 0.5, 1.0, 2.0),
                   help="conservation: comma-separated x grid")
    p.add_argument("--method", choices=["auto", "enumerate", "sample"], default="sample")
    p.add_argument("--workers", type=_positive_int, default=1)
    _add_model_flags(p)
    return parser


def _fmt(x, args, places=4):
    return format_number(x, None if args.raw else places, args.rounding)


def _sided(args):
    return Sidedness.ONE_SIDED_UPPER if args.sided == "one" else Sidedness.TWO_SIDED


def _mode(args):
    return CriticalMode(args.mode)


def cmd_critical(args, out):
    units = args.unit
    if args.sided == "one":
        if args.mode != "exact":
            raise DomainError("--mode paper-table applies to two-sided tests only")
        vals = [critical_one_sided(args.alpha, args.ref, args.prior, u) for u in units]
    else:
        crit = critical_two_sided(args.alpha, args.ref, args.prior, _mode(args))
        vals = [crit.to(u) for u in units]
    for v in vals:
        text = _fmt(v.value, args)
        print(text if len(vals) == 1 else f"{v.unit}\t{text}", file=out)
    return EXIT_OK


def cmd_test(args, out):
    spec = TestSpec(_sided(args), args.alpha, args.unit, args.ref, args.prior, _mode(args))
    result = run_test(args.p_obs, spec)
    print(json.dumps(result.to_dict()), file=out)
    return EXIT_REJECT if result.reject else EXIT_OK


def cmd_table(args, out):
    if args.preset:
        if args.alphas:
            raise DomainError("--preset and --alphas are mutually exclusive")
        base = PRESETS[args.preset]
    else:
        if not args.alphas:
            raise DomainError("--alphas is required without --preset")
        base = TableSpec(args.alphas, _sided(args), args.ref, args.prior, _mode(args),
                         (NATS,))
        if base.sidedness is Sidedness.ONE_SIDED_UPPER and base.mode is not CriticalMode.EXACT:
            raise DomainError("--mode paper-table applies to two-sided tables only")
    spec = TableSpec(
        alphas=base.alphas,
        sidedness=base.sidedness,
        ref=base.ref,
        prior=base.prior,
        mode=base.mode,
        units=args.units or base.units,
        format=args.format or base.format,
        precision=None if args.raw else (args.precision or base.precision),
        rounding=args.rounding,
    )
    out.write(generate_table(spec))
    return EXIT_OK


def cmd_cdf(args, out):
    x = InfoValue(args.x, args.unit)
    if args.sided == "one":
        fn = tail_one_sided if args.tail else cdf_one_sided
        value = fn(x, args.ref, args.prior)
    else:
        fn = tail_two_sided if args.tail else cdf_two_sided
        value = fn(x.nats, args.ref, args.prior)
    print(_fmt(value, args, 6), file=out)
    return EXIT_OK


def cmd_gof(args, out):
    if args.csv:
        if args.p or args.q:
            raise DomainError("--csv excludes --p/--q")
        ps, qs = read_pair_csv(args.csv)
    elif args.p and args.q:
        ps, qs = read_pair_files(args.p, args.q)
    else:
        raise DomainError("give --csv or both --p and --q")
    data = Grid(ps, qs, args.step) if args.step is not None else Discrete(ps, qs)
    print(_fmt(gof_statistic(data, args.unit), args, 6), file=out)
    return EXIT_OK


def _mc_cdf(args, tail):
    if args.threshold is None:
        raise DomainError("--threshold is required for cdf/tail checks")
    sided = _sided(args)
    thr = InfoValue(args.threshold, args.unit)
    if sided is Sidedness.ONE_SIDED_UPPER:
        exact = cdf_one_sided(thr, args.ref, args.prior)
    else:
        if thr.nats < 0:
            raise DomainError("--threshold must be >= 0 for two-sided checks")
        exact = cdf_two_sided(thr.nats, args.ref, args.prior)
    est = empirical_cdf(thr, sided, args.ref, args.prior, args.seed, args.samples, args.workers)
    estimate = est.estimate
    if tail:
        exact, estimate = 1.0 - exact, 1.0 - estimate
    ok = abs(estimate - exact) <= 4 * est.std_error
    return {"target": "tail" if tail else "cdf", "estimate": estimate, "std_error": est.std_error,
            "exact": exact, "pass": ok}


def _mc_critical(args):
    if args.alpha is None:
        raise DomainError("--alpha is required for critical checks")
    if args.samples < 1000:
        raise DomainError("--samples must be >= 1000 for critical checks")
    sided = _sided(args)
    q = args.ref.q_eff
    if sided is Sidedness.ONE_SIDED_UPPER:
        exact = critical_one_sided(args.alpha, args.ref, args.prior).value
        density = q * math.exp(exact) * prior_pdf(args.prior, q * math.exp(exact))
    else:
        exact = critical_two_sided(args.alpha, args.ref, args.prior).value
        density = q * math.exp(exact) * prior_pdf(args.prior, min(1.0, q * math.exp(exact)))
        density = density * (q * math.exp(exact) <= 1.0)
        density += q * math.exp(-exact) * prior_pdf(args.prior, q * math.exp(-exact))
    estimate = empirical_critical(args.alpha, sided, args.ref, args.prior, args.seed,
                                  args.samples, args.workers)
    se = quantile_std_error(args.alpha, density, args.samples) if density > 0 else math.inf
    return {"target": "critical", "estimate": estimate, "std_error": se, "exact": exact,
            "unit": "nats", "pass": abs(estimate - exact) <= 4 * se}


def _mc_size(args):
    if args.alpha is None:
        raise DomainError("--alpha is required for size checks")
    spec = TestSpec(_sided(args), args.alpha, NATS, args.ref, args.prior)
    est = null_rejection_rate(spec, args.seed, args.samples, args.workers)
    return {"target": "size", "estimate": est.estimate, "std_error": est.std_error,
            "exact": args.alpha, "pass": est.agrees(args.alpha, 3.0)}


def _mc_conservation(args):
    if not (args.p and args.v and args.r is not None):
        raise DomainError("conservation checks need --p, --v and --r")
    dist = DiscreteDist.from_file(args.p)
    v = read_column(args.v)
    rows = conservation_bound_check(dist, v, args.r, args.x, args.seed, args.samples,
                                    args.method)
    checks = [{"x": r.x, "lhs": r.lhs, "std_error": r.std_error, "bound": r.bound,
               "pass": r.holds} for r in rows]
    return {"target": "conservation", "checks": checks, "pass": all(c["pass"] for c in checks)}


def cmd_mc_check(args, out):
    if args.target in ("cdf", "tail"):
        report = _mc_cdf(args, args.target == "tail")
    elif args.target == "critical":
        report = _mc_critical(args)
    elif args.target == "size":
        report = _mc_size(args)
    else:
        report = _mc_conservation(args)
    report.update(seed=args.seed, samples=args.samples)
    print(json.dumps(report), file=out)
    return EXIT_OK if report["pass"] else EXIT_REJECT


COMMANDS = {
    "critical": cmd_critical,
    "test": cmd_test,
    "table": cmd_table,
    "cdf": cmd_cdf,
    "gof": cmd_gof,
    "mc-check": cmd_mc_check,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else EXIT_OK
    try:
        return COMMANDS[args.command](args, out)
    except (DomainError, ValueError, OSError) as e:
        print(f"activeinfo {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
