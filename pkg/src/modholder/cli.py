"""modholder command line: coeffs | plot | estimate | verify | figures.

Exit codes: 0 success, 1 a verdict failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import logging
import sys
import warnings
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import figures, modcoeffs, reports, verify
from .fixtures import fixture_exponents, fixture_from_name
from .modcoeffs import ResourceError
from .regularity.estimators import (
    QUANTITY,
    InapplicableMethod,
    Method,
    default_method,
    estimate_fixture,
    estimate_series,
)
from .regularity.fitting import DecayModel, FitError
from .regularity.prediction import parse_point, predict_exponents
from .series_eval import Flavor, SeriesSpec, grid_csv

log = logging.getLogger("modholder")


class UsageError(Exception):
    pass


def _scales(text):
    if text is None:
        return None
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError:
        raise UsageError(f"--scales wants j0:j1, got {text!r}") from None
    if hi <= lo:
        raise UsageError("--scales needs j0 < j1")
    return np.arange(lo, hi + 1e-9, 1.0)


def _fraction(text, what):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{what} must be a rational literal like 7/4, got {text!r}") from None


def _is_fixture(name):
    return name in verify.FIXTURES or name.startswith("power_cusp")


def cmd_coeffs(args) -> int:
    if args.series not in modcoeffs.BUILTIN_N:
        raise UsageError(f"unknown series {args.series!r}; choose from {', '.join(sorted(modcoeffs.BUILTIN_N))}")
    seq = modcoeffs.builtin(args.series, args.n)
    reports.atomic_write(args.out, modcoeffs.format_cache(seq))
    print(f"wrote {seq.N} coefficients of {seq.name} to {args.out}")
    return 0


def cmd_plot(args) -> int:
    if args.preset:
        if args.preset not in figures.PRESETS:
            raise UsageError(f"unknown preset {args.preset!r}; choose from {', '.join(figures.PRESETS)}")
        preset = figures.PRESETS[args.preset]
    else:
        if not (args.series and args.alpha and args.range):
            raise UsageError("a custom plot needs --series, --alpha and --range (or use --preset)")
        lo, hi = (_fraction(v, "--range") for v in args.range.split(":"))
        preset = figures.FigurePreset("custom", args.series, _fraction(args.alpha, "--alpha"), Flavor(args.flavor),
                                      (lo, hi), args.samples,
                                      f"{args.series}, alpha = {args.alpha}, {args.flavor}, [{lo}, {hi}]")
    svg, csv = figures.write_preset(preset, args.out, args.cache_dir)
    print(f"wrote {svg} and {csv}")
    return 0


def cmd_figures(args) -> int:
    for svg, csv in figures.write_all(args.out, args.cache_dir):
        print(f"wrote {svg} and {csv}")
    return 0


def cmd_estimate(args) -> int:
    js = _scales(args.scales)
    method = Method(args.method)
    if _is_fixture(args.series):
        fx = fixture_from_name(args.series)
        try:
            res = estimate_fixture(fx, method, js)
        except InapplicableMethod as exc:
            raise UsageError(str(exc)) from None
        triple = fixture_exponents(fx)
        predicted = {k: reports._float_or_inf(v) for k, v in zip(("beta", "beta_star", "beta_starstar"), triple)}
        expected = predicted[res.quantity]
        v = reports.verdict(res.value, None if expected == "inf" else expected, args.tol)
        report = reports.estimate_report(args.series, None, str(fx.point), predicted, res.as_dict(), v,
                                         method=res.method.value, quantity=res.quantity)
    else:
        if args.series not in modcoeffs.BUILTIN_N:
            raise UsageError(f"unknown series {args.series!r}")
        if args.alpha is None:
            raise UsageError("--alpha is required for a series")
        alpha = _fraction(args.alpha, "--alpha")
        try:
            point = parse_point(args.point)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        seq = modcoeffs.cached(args.series, cache_dir=args.cache_dir)
        if alpha <= seq.growth_exponent:
            raise UsageError(f"alpha must exceed the growth exponent {seq.growth_exponent} of {seq.name}")
        pred = predict_exponents(seq, alpha, point)
        try:
            res = estimate_series(seq, alpha, point, method, js, pred)
        except InapplicableMethod as exc:
            raise UsageError(str(exc)) from None
        if res.quantity == "decay":
            q = point.rational
            cusp = q is not None and modcoeffs.classify_rational_point(
                seq, q.numerator, q.denominator).decay_constant_expected
            want = DecayModel.EXPONENTIAL if cusp else DecayModel.POWER_LAW
            v = "pass" if res.decay.model is want else "fail"
            if want is DecayModel.POWER_LAW and v == "pass" and not point.is_rational:
                v = reports.verdict(res.value, -float(seq.growth_exponent), args.tol)
        else:
            expected = pred.get(res.quantity)
            v = reports.verdict(res.value, expected, args.tol)
        report = reports.estimate_report(seq.name, alpha, point.label, pred.as_dict(), res.as_dict(), v,
                                         method=res.method.value, quantity=res.quantity,
                                         conditions=pred.conditions_report)
    out = Path(args.out)
    reports.atomic_write(out.with_suffix(".csv"), res.scan.to_csv())
    reports.atomic_write(out.with_suffix(".json"), reports.dumps(report))
    print(f"{report['series']} {res.method.value}: {res.quantity} = {res.value:.4f} "
          f"(stderr {res.stderr:.3g}, r2 {res.r_squared:.4f}) -> {report['verdict']}")
    return 1 if report["verdict"] == "fail" else 0


def cmd_verify(args) -> int:
    rows = verify.run_suite(args.suite, args.cache_dir, progress=lambda r: print(verify.format_row(r), flush=True))
    ok = verify.all_passed(rows)
    table = "\n".join(verify.format_row(r) for r in rows) + "\n"
    if args.out:
        out = Path(args.out)
        reports.atomic_write(out.with_suffix(".json"),
                             reports.dumps({"suite": args.suite, "passed": ok, "rows": [r.as_dict() for r in rows]}))
        reports.atomic_write(out.with_suffix(".txt"), table)
    n_fail = sum(r.verdict == "fail" for r in rows)
    print(f"{args.suite}: {len(rows) - n_fail}/{len(rows)} rows pass")
    return 0 if ok else 1


class _Parser(argparse.ArgumentParser):
    def __init__(self, *a, **kw):
        kw.setdefault("allow_abbrev", False)
        super().__init__(*a, **kw)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="modholder", description="Hoelder regularity of fractional integrals of modular forms")
    p.add_argument("--cache-dir", type=Path, default=None, help="directory for coefficient cache files")
    p.add_argument("--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("coeffs", help="write a coefficient cache file")
    c.add_argument("--series", required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_coeffs)

    pl = sub.add_parser("plot", help="plot a preset or a custom series to SVG + CSV")
    pl.add_argument("--preset")
    pl.add_argument("--series")
    pl.add_argument("--alpha")
    pl.add_argument("--flavor", choices=[f.value for f in Flavor], default="sine")
    pl.add_argument("--range", help="lo:hi, rational literals")
    pl.add_argument("--samples", type=int, default=4096)
    pl.add_argument("--out", required=True, help="output prefix; .svg and .csv are appended")
    pl.set_defaults(func=cmd_plot)

    e = sub.add_parser("estimate", help="estimate a Hoelder exponent and compare with the prediction")
    e.add_argument("--series", required=True, help="built-in series or fixture (chirp4, power_cusp[:s])")
    e.add_argument("--alpha")
    e.add_argument("--point", default="0", help="p/q, or sqrt2m1 | golden | sqrt3m1")
    e.add_argument("--method", choices=[m.value for m in Method], default="auto")
    e.add_argument("--scales", help="j0:j1 scale window")
    e.add_argument("--tol", type=float, default=0.1)
    e.add_argument("--out", required=True, help="output prefix; .csv (scan) and .json (report)")
    e.set_defaults(func=cmd_estimate)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", choices=sorted(verify.SUITES), default="quick")
    v.add_argument("--out", help="output prefix; .json and .txt")
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("figures", help="write all six figure presets")
    f.add_argument("--out", required=True, help="output directory")
    f.set_defaults(func=cmd_figures)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        with warnings.catch_warnings():
            if not args.verbose:
                warnings.simplefilter("ignore", RuntimeWarning)
            return args.func(args)
    except (UsageError, KeyError, ResourceError, FitError, ValueError) as exc:
        msg = exc.args[0] if exc.args else exc
        print(f"modholder: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
