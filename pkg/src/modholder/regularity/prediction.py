"""Closed-form exponent predictions for the fractional integrals of modular forms.

Everything is exact rational arithmetic on alpha and the weight r.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from ..modcoeffs import CoefficientSequence, CuspKind, classify_rational_point

NEG_INF = -math.inf


@dataclass(frozen=True)
class ProbePoint:
    """A rational p/q (exact) or a named quadratic irrational."""

    label: str
    value: float
    rational: Fraction | None = None

    @property
    def is_rational(self) -> bool:
        return self.rational is not None

    @property
    def phase_point(self):
        """What the evaluators should receive: the Fraction itself, or the float."""
        return self.rational if self.rational is not None else self.value


IRRATIONALS = {
    "sqrt2m1": math.sqrt(2.0) - 1.0,
    "golden": (math.sqrt(5.0) - 1.0) / 2.0,
    "sqrt3m1": math.sqrt(3.0) - 1.0,
}


def parse_point(text) -> ProbePoint:
    """'p/q' or an integer literal, or one of the irrational keywords."""
    if isinstance(text, ProbePoint):
        return text
    if isinstance(text, Fraction):
        return ProbePoint(str(text), float(text), text)
    key = str(text).strip()
    if key in IRRATIONALS:
        return ProbePoint(key, IRRATIONALS[key])
    try:
        q = Fraction(key)
    except ValueError:
        raise ValueError(
            f"point {key!r} is neither p/q nor one of {sorted(IRRATIONALS)}; "
            "decimals are refused because they would silently become rationals"
        ) from None
    if "." in key or "e" in key.lower():
        raise ValueError(f"write rational points as p/q, not {key!r}")
    return ProbePoint(key, float(q), q)


@dataclass(frozen=True)
class RegularityPrediction:
    beta: Fraction | None
    beta_star: Fraction | None
    beta_starstar: Fraction | None
    gamma: Fraction | None
    theorem_tag: str
    applicable: bool
    conditions_report: str
    notes: tuple = field(default_factory=tuple)

    def __post_init__(self):
        b, bs, bss = self.beta, self.beta_star, self.beta_starstar
        if None not in (b, bs, bss) and not (b >= bs >= bss):
            raise ValueError(f"prediction violates beta >= beta* >= beta**: {b}, {bs}, {bss}")

    def get(self, quantity: str):
        return {"beta": self.beta, "beta_star": self.beta_star, "beta_starstar": self.beta_starstar}[quantity]

    def as_dict(self) -> dict:
        f = lambda v: None if v is None else float(v)
        return {"beta": f(self.beta), "beta_star": f(self.beta_star), "beta_starstar": f(self.beta_starstar)}


def _floor(x: Fraction) -> int:
    return math.floor(x)


def _frac(x: Fraction) -> Fraction:
    return x - math.floor(x)


def cusp_rational_condition(alpha: Fraction, r: Fraction) -> bool:
    """alpha >= 1 + floor(2 alpha - r), the hypothesis for the rational values."""
    return alpha >= 1 + _floor(2 * alpha - r)


def restricted_value(alpha: Fraction, r: Fraction) -> Fraction:
    a = alpha - r / 2
    return _floor(a) + min(Fraction(1), 2 * _frac(a))


def restricted_value_printed(alpha: Fraction, r: Fraction) -> Fraction:
    """The variant with floor(2 alpha - r) in front; it can exceed beta."""
    a = alpha - r / 2
    return _floor(2 * alpha - r) + min(Fraction(1), 2 * _frac(a))


def predict_exponents(seq: CoefficientSequence, alpha, point) -> RegularityPrediction:
    alpha = Fraction(alpha)
    point = parse_point(point)
    r = seq.weight
    gamma = seq.growth_exponent
    if alpha <= gamma:
        return RegularityPrediction(None, None, None, gamma, "none", False,
                                    f"alpha = {alpha} does not exceed the growth exponent {gamma}")
    if seq.is_cusp_form:
        a = alpha - r / 2
        if not point.is_rational:
            return RegularityPrediction(a, a, a, r / 2, "cusp-irrational", True,
                                        f"cusp form, irrational point, alpha = {alpha} > r/2 = {r / 2}")
        cond = cusp_rational_condition(alpha, r)
        printed = restricted_value_printed(alpha, r)
        if cond:
            beta, bstar = 2 * alpha - r, restricted_value(alpha, r)
            report = (f"cusp form, rational point; alpha = {alpha} >= 1 + floor(2 alpha - r) = "
                      f"{1 + _floor(2 * alpha - r)} holds; beta* uses floor(alpha - r/2) + min(1, 2{{alpha - r/2}}) "
                      f"= {bstar} (the floor(2 alpha - r) variant would give {printed})")
            return RegularityPrediction(beta, bstar, a, r / 2, "cusp-rational", True, report)
        report = (f"cusp form, rational point; alpha = {alpha} >= 1 + floor(2 alpha - r) = "
                  f"{1 + _floor(2 * alpha - r)} FAILS, so beta and beta* are not predicted; beta** = {a}")
        return RegularityPrediction(None, None, a, r / 2, "cusp-rational", True, report)
    if not point.is_rational:
        return RegularityPrediction(None, None, None, gamma, "none", False,
                                    "non-cusp form at an irrational point: no prediction")
    q = point.rational
    kind = classify_rational_point(seq, q.numerator, q.denominator).kind
    if kind is CuspKind.CUSPIDAL:
        return RegularityPrediction(None, None, None, gamma, "none", False,
                                    f"{seq.name} is cuspidal at {q}: no prediction for a non-cusp form there")
    checks = [(alpha > r, f"alpha > r ({alpha} > {r})"),
              (1 + _floor(alpha - r) <= alpha, f"1 + floor(alpha - r) <= alpha ({1 + _floor(alpha - r)} <= {alpha})")]
    failed = [txt for ok, txt in checks if not ok]
    if failed:
        return RegularityPrediction(None, None, None, gamma, "noncusp-rational", False,
                                    f"not cuspidal at {q}; failed: " + "; ".join(failed))
    return RegularityPrediction(alpha - r, None, None, gamma, "noncusp-rational", True,
                                f"not cuspidal at {q}; " + "; ".join(t for _, t in checks) + " hold")


@dataclass(frozen=True)
class Spectrum:
    """delta -> Hausdorff dimension of {beta = delta}; unlisted deltas map to -inf."""

    entries: dict
    applicable: bool
    rational_condition: bool
    report: str

    def dimension(self, delta) -> float:
        return self.entries.get(Fraction(delta), NEG_INF)


def predict_spectrum(seq: CoefficientSequence, alpha) -> Spectrum:
    alpha = Fraction(alpha)
    r = seq.weight
    if not seq.is_cusp_form:
        return Spectrum({}, False, False, f"{seq.name} is not a cusp form")
    if alpha <= r / 2:
        return Spectrum({}, False, False, f"alpha = {alpha} must exceed r/2 = {r / 2}")
    cond = cusp_rational_condition(alpha, r)
    irr, rat = alpha - r / 2, 2 * alpha - r
    entries = {irr: 1} if irr == rat else {irr: 1, rat: 0}
    report = f"irrationals: beta = {irr} (full measure); rationals: beta = {rat} (countable)"
    if not cond:
        report += (f"; the rational-point hypothesis alpha >= 1 + floor(2 alpha - r) = "
                   f"{1 + _floor(rat)} is FALSE, the rational value rests on an external result")
    return Spectrum(entries, True, cond, report)
