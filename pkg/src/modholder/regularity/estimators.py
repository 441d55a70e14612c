"""One entry point per estimation method, for series and fixtures alike."""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..fixtures import Fixture, FixtureKind, fixture_exponents
from ..modcoeffs import CoefficientSequence, CuspKind, classify_rational_point
from ..series_eval import Flavor, SeriesSpec, eval_grid_fft, eval_points
from .fitting import DecayFit, ExponentEstimate, FitError, ScaleScan, fit_slope
from .prediction import ProbePoint, RegularityPrediction, parse_point, predict_exponents
from .scans import (
    cone_scan,
    local_exponent,
    microlocal_scan,
    oscillation_scan,
    restricted_exponent,
    series_cone_scan,
    vertical_scan,
)
from .wavelet import line_transform_quadrature


class Method(str, enum.Enum):
    AUTO = "auto"
    CONE = "cone"
    MICROLOCAL = "microlocal"
    OSCILLATION = "oscillation"
    RESTRICTED = "restricted"
    LOCAL = "local"
    VERTICAL = "vertical"


# which exponent each method measures
QUANTITY = {
    Method.CONE: "beta",
    Method.MICROLOCAL: "beta",
    Method.OSCILLATION: "beta",
    Method.RESTRICTED: "beta_star",
    Method.LOCAL: "beta_starstar",
    Method.VERTICAL: "decay",
}


class InapplicableMethod(ValueError):
    pass


@dataclass
class EstimateResult:
    method: Method
    quantity: str
    value: float
    stderr: float
    r_squared: float
    window: tuple
    scans: list = field(default_factory=list)
    decay: DecayFit | None = None
    details: dict = field(default_factory=dict)

    @property
    def scan(self) -> ScaleScan:
        return self.scans[0]

    def as_dict(self) -> dict:
        out = {"value": _num(self.value), "stderr": _num(self.stderr), "r2": _num(self.r_squared),
               "window": list(self.window)}
        if self.decay is not None:
            out["decay"] = self.decay.as_dict()
        return out


def _num(v):
    if v is None:
        return None
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return None if math.isnan(v) else v


def _from_fit(method, est: ExponentEstimate, scans, **details) -> EstimateResult:
    return EstimateResult(method, QUANTITY[method], est.slope, est.stderr, est.r_squared,
                          est.fit_range, list(scans), details=details)


def _from_ordered(method, ordered, **details) -> EstimateResult:
    fits = [e for _, e in ordered.per_order if e is not None]
    r2 = min((e.r_squared for e in fits), default=1.0)
    window = fits[-1].fit_range if fits else ()
    per = {int(k): (None if e is None else e.slope) for k, e in ordered.per_order}
    return EstimateResult(method, QUANTITY[method], ordered.value, ordered.stderr, r2, window,
                          ordered.scans, details={"per_order_slope": per, "stopped_at": ordered.stopped_at,
                                                  **details})


def _window(js, default):
    return np.asarray(default if js is None else js, dtype=float)


def default_method(seq: CoefficientSequence, point: ProbePoint) -> Method:
    """Cone scan, except at points where the form is cuspidal: there the
    vertical limit vanishes and the box scan is needed."""
    if point.is_rational:
        q = point.rational
        if classify_rational_point(seq, q.numerator, q.denominator).kind is CuspKind.CUSPIDAL:
            return Method.MICROLOCAL
    return Method.CONE


def estimate_series(seq: CoefficientSequence, alpha, point, method=Method.AUTO, js=None,
                    prediction: RegularityPrediction | None = None) -> EstimateResult:
    alpha = Fraction(alpha)
    point = parse_point(point)
    method = Method(method)
    if method is Method.AUTO:
        method = default_method(seq, point)
    x0 = point.phase_point
    if method is Method.CONE:
        scan = series_cone_scan(seq, alpha, x0, _window(js, range(6, 17)))
        return _from_fit(method, fit_slope(scan), [scan], K=scan.params["K"])
    if method is Method.MICROLOCAL:
        scan = microlocal_scan(seq, alpha, x0, None if js is None else _window(js, ()))
        return _from_fit(method, fit_slope(scan, finest=5), [scan])
    if method is Method.VERTICAL:
        scan, decay = vertical_scan(seq, x0, None if js is None else _window(js, ()))
        res = EstimateResult(method, "decay", decay.exponent_or_rate, math.nan, decay.r_squared,
                             decay.window[:2], [scan], decay)
        res.details["model"] = decay.model.value
        return res
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        spec = SeriesSpec(seq, alpha)
    if method is Method.OSCILLATION:
        prediction = prediction or predict_exponents(seq, alpha, point)
        beta = prediction.beta
        m = math.floor(beta) + 1 if beta is not None else None
        N = seq.N
        ev = lambda x: eval_points(spec, x, N)
        scans_ = []
        if m is None:
            # adaptive: raise m while the slope keeps growing by more than 0.1
            m, last = 1, -math.inf
            while m <= 6:
                sc = oscillation_scan(ev, point.value, m, _window(js, range(6, 17)))
                scans_.append(sc)
                s = fit_slope(sc).slope
                if s <= last + 0.1:
                    break
                last, m = s, m + 1
            scan = scans_[-1]
        else:
            scan = oscillation_scan(ev, point.value, m, _window(js, range(6, 17)))
        return _from_fit(method, fit_slope(scan), [scan], m=scan.params["m"])
    if method is Method.LOCAL:
        kmax = math.ceil(alpha - seq.growth_exponent) - 1
        samplers = [_fft_sampler(spec.with_derivative(k), point.value) for k in range(kmax + 1)]
        ordered = local_exponent([None] * (kmax + 1), point.value, _window(js, range(2, 7)),
                                 L=14, samplers=samplers)
        return _from_ordered(method, ordered, derivative_cap=kmax)
    raise InapplicableMethod(f"method {method.value} is not available for series")


def _fft_sampler(spec: SeriesSpec, x0: float, max_log2: int = 22):
    def sample(j, L):
        L = min(L, max_log2 - int(j))
        M = 1 << (int(j) + L)
        N = min(spec.coeffs.N, M // 2 - 1)
        r = 2.0**-j
        grid = eval_grid_fft(spec, M, N, x_start=x0 - r)
        return np.asarray(grid.values)[: (1 << (L + 1)) + 1]

    return sample


def estimate_fixture(fx: Fixture, method=Method.OSCILLATION, js=None, cone_alpha: float = 2.0) -> EstimateResult:
    method = Method(method)
    x0 = fx.point
    beta = fixture_exponents(fx)[0]
    if method in (Method.AUTO, Method.OSCILLATION):
        m = math.floor(beta) + 1 if beta != math.inf else 5
        scan = oscillation_scan(fx, x0, m, _window(js, range(4, 15)))
        return _from_fit(Method.OSCILLATION, fit_slope(scan, finest=None), [scan], m=m)
    nder = {FixtureKind.CHIRP4: 3, FixtureKind.EXTREME_CHIRP: 2}.get(fx.kind, math.floor(fx.s) + 2)
    ders = [lambda x, k=k: fx.derivative(k, x) for k in range(nder)]
    if method is Method.RESTRICTED:
        return _from_ordered(method, restricted_exponent(ders, x0, _window(js, range(4, 15))))
    if method is Method.LOCAL:
        return _from_ordered(method, local_exponent(ders, x0, _window(js, range(2, 7))))
    if method is Method.CONE:
        if fx.kind is not FixtureKind.POWER_CUSP:
            # the chirps oscillate too fast near 0 for adaptive quadrature
            raise InapplicableMethod("the cone scan is only available for power_cusp fixtures")

        def tr(a, b):
            return np.array([abs(line_transform_quadrature(fx, cone_alpha, a, bb, breakpoints=(x0,))) for bb in b])
        scan = cone_scan(tr, x0, _window(js, range(4, 13)), K=1.0, n_sweep=5)
        return _from_fit(method, fit_slope(scan, finest=None), [scan], alpha=cone_alpha)
    raise InapplicableMethod(f"method {method.value} is not available for fixtures")
