"""Verification suites: predicted vs estimated exponents, one row per case."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction

from . import modcoeffs
from .fixtures import fixture_exponents, fixture_from_name
from .regularity.estimators import Method, estimate_fixture, estimate_series
from .regularity.fitting import DecayModel
from .regularity.prediction import parse_point, predict_exponents
from .reports import verdict

FIXTURES = ("chirp4", "extreme_chirp", "power_cusp")


@dataclass(frozen=True)
class Case:
    series: str
    alpha: Fraction | None
    point: str
    method: str
    quantity: str
    tol: float
    bound: float | None = None  # lower bound when no closed-form value applies
    note: str = ""


def _c(series, alpha, point, method, quantity="beta", tol=0.10, bound=None, note=""):
    return Case(series, None if alpha is None else Fraction(alpha), point, method, quantity, tol, bound, note)


QUICK = [
    _c("elliptic14", "7/4", "sqrt2m1", "cone"),
    _c("theta12", 1, "golden", "cone"),
    _c("jacobi", 1, "0", "cone"),
    _c("eisenstein4", 5, "0", "cone"),
    _c("harmonic", "13/4", "1/2", "microlocal", tol=0.2),
    _c("jacobi", 1, "1/2", "vertical", "decay", note="exponential model, r2 >= 0.99"),
    _c("chirp4", None, "0", "oscillation", tol=0.3),
    _c("power_cusp", None, "0", "oscillation", tol=0.05),
]

FULL = QUICK[:-2] + [
    _c("elliptic14", "7/4", "golden", "cone"),
    _c("theta12", 1, "sqrt2m1", "cone"),
    _c("harmonic", "13/4", "sqrt2m1", "cone"),
    _c("harmonic", "13/4", "golden", "cone"),
    _c("harmonic", "13/4", "0", "microlocal", tol=0.2),
    _c("elliptic14", "7/4", "0", "microlocal", bound=1.2, note="differentiable at rationals"),
    _c("jacobi", 1, "1/3", "cone"),
    _c("eisenstein4", 5, "1/3", "cone"),
    _c("elliptic14", "7/4", "0", "vertical", "decay", note="exponential model"),
    _c("elliptic14", "7/4", "sqrt2m1", "vertical", "decay", tol=0.15, note="power law, exponent -gamma"),
    _c("chirp4", None, "0", "oscillation", tol=0.3),
    _c("chirp4", None, "0", "restricted", "beta_star", tol=0.2),
    _c("chirp4", None, "0", "local", "beta_starstar", tol=0.15),
    _c("power_cusp", None, "0", "oscillation", tol=0.05),
    _c("power_cusp", None, "0", "restricted", "beta_star", tol=0.05),
    _c("power_cusp", None, "0", "local", "beta_starstar", tol=0.05),
    _c("power_cusp", None, "0", "cone", tol=0.05),
]

SUITES = {"quick": QUICK, "full": FULL}


@dataclass
class Row:
    case: Case
    predicted: float | None
    estimate: float | None
    r2: float | None
    verdict: str
    detail: str
    seconds: float

    @property
    def difference(self):
        if self.predicted is None or self.estimate is None:
            return None
        return abs(self.estimate - self.predicted)

    def as_dict(self) -> dict:
        c = self.case
        return {
            "series": c.series, "alpha": None if c.alpha is None else str(c.alpha), "point": c.point,
            "method": c.method, "quantity": c.quantity, "predicted": self.predicted,
            "estimated": self.estimate, "r2": self.r2, "difference": self.difference,
            "tolerance": c.tol, "lower_bound": c.bound, "verdict": self.verdict, "detail": self.detail,
        }


def _vertical_row(case: Case, seq, res) -> tuple:
    decay = res.decay
    pt = parse_point(case.point)
    if pt.is_rational:
        q = pt.rational
        cusp = modcoeffs.classify_rational_point(seq, q.numerator, q.denominator).decay_constant_expected
    else:
        cusp = False
    if cusp:
        ok = decay.model is DecayModel.EXPONENTIAL and decay.r_squared >= 0.99
        return None, "pass" if ok else "fail", f"model={decay.model.value} r2={decay.r_squared:.4f}"
    pred = -float(seq.growth_exponent)
    ok = decay.model is DecayModel.POWER_LAW and abs(decay.exponent_or_rate - pred) <= case.tol
    return pred, "pass" if ok else "fail", f"model={decay.model.value} exponent={decay.exponent_or_rate:.3f}"


def run_case(case: Case, cache_dir=None) -> Row:
    t0 = time.perf_counter()
    if case.series in FIXTURES or case.series.startswith("power_cusp"):
        fx = fixture_from_name(case.series)
        idx = {"beta": 0, "beta_star": 1, "beta_starstar": 2}[case.quantity]
        pred = float(fixture_exponents(fx)[idx])
        res = estimate_fixture(fx, case.method)
        v = verdict(res.value, pred, case.tol)
        return Row(case, pred, res.value, res.r_squared, v, "", time.perf_counter() - t0)
    seq = modcoeffs.cached(case.series, cache_dir=cache_dir)
    res = estimate_series(seq, case.alpha, case.point, Method(case.method))
    if case.method == "vertical":
        pred, v, detail = _vertical_row(case, seq, res)
        return Row(case, pred, res.value, res.r_squared, v, detail, time.perf_counter() - t0)
    prediction = predict_exponents(seq, case.alpha, case.point)
    pred = prediction.get(case.quantity)
    if pred is not None:
        v = verdict(res.value, pred, case.tol)
        pred = float(pred)
        detail = prediction.theorem_tag
    elif case.bound is not None:
        v = verdict(res.value, case.bound, 0.0, kind="min")
        detail = f"lower bound {case.bound} ({case.note}); {prediction.conditions_report}"
    else:
        v, detail = "inapplicable", prediction.conditions_report
    return Row(case, pred, res.value, res.r_squared, v, detail, time.perf_counter() - t0)


def run_suite(name: str, cache_dir=None, progress=None) -> list[Row]:
    rows = []
    for case in SUITES[name]:
        row = run_case(case, cache_dir)
        rows.append(row)
        if progress:
            progress(row)
    return rows


def format_row(row: Row) -> str:
    c = row.case
    f = lambda v: "-" if v is None or (isinstance(v, float) and math.isnan(v)) else f"{v:.4f}"
    alpha = "-" if c.alpha is None else str(c.alpha)
    return (f"{row.verdict.upper():5s} {c.series:12s} alpha={alpha:5s} x0={c.point:8s} {c.method:11s} "
            f"{c.quantity:13s} pred={f(row.predicted):8s} est={f(row.estimate):8s} "
            f"tol={c.tol:.2f} ({row.seconds:.1f}s) {row.detail}")


def all_passed(rows) -> bool:
    return all(r.verdict != "fail" for r in rows)
