"""Scale scans: cone, microlocal box, oscillation, local pair, restricted,
vertical, partial-sum growth and L^2 energy."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from ..modcoeffs import CoefficientSequence
from ..series_eval import (
    _fold,
    cis,
    halfplane_abs_sum,
    halfplane_cutoff,
    halfplane_row,
    halfplane_tail,
)
from .fitting import (
    SENTINEL,
    DecayFit,
    DegenerateScanError,
    ExponentEstimate,
    FitError,
    ScaleScan,
    ScanKind,
    fit_slope,
    ols,
    select_decay_model,
)
from .wavelet import wavelet_constant

DEFAULT_CONE_SCALES = tuple(range(6, 17))
# relative size of an estimated truncation tail that still counts as usable
TAIL_TOLERANCE = 1e-4


def _log2(v: np.ndarray, floor: float = 1e-300) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    out = np.full(v.shape, SENTINEL)
    ok = v > floor
    out[ok] = np.log2(v[ok])
    return out


def _check_degenerate(scan: ScaleScan):
    if not scan.usable.any():
        raise DegenerateScanError(f"{scan.scan_kind.value} scan: every modulus is below the numerical floor")
    return scan


def _pt(x0):
    """Point for phases (Fraction kept exact) and its float value."""
    return x0, float(x0)


# ---------------------------------------------------------------------------
# cone scan of the analytic wavelet transform


def cone_scan(transform_abs: Callable[[float, np.ndarray], np.ndarray], x0: float,
              js: Sequence[float] = DEFAULT_CONE_SCALES, K: float = 8.0, n_sweep: int = 65) -> ScaleScan:
    """log2 sup_{|b - x0| <= K a} |W(a, b)| at a = 2^-j, from any transform.

    ``transform_abs(a, b_array)`` returns |W| at the sweep positions.
    """
    js = np.asarray(js, dtype=float)
    vals = []
    for j in js:
        a = 2.0**-j
        b = float(x0) + np.linspace(-K * a, K * a, n_sweep) if K > 0 else np.array([float(x0)])
        vals.append(float(np.max(transform_abs(a, b))))
    scan = ScaleScan(js, -js, _log2(np.array(vals)), ScanKind.CONE,
                     {"x0": str(x0), "K": K, "sweep": n_sweep})
    return _check_degenerate(scan)


def _cone_row(coeffs: CoefficientSequence, x0, y: float, K: float, n_sweep: int):
    """|f - a_0| on a uniform sweep of [x0 - K y, x0 + K y] via one folded FFT."""
    if K == 0:
        row, N = halfplane_row(coeffs, y, 1, x0)
        return np.abs(row), N
    M = 1 << max(0, math.ceil(math.log2((n_sweep - 1) / (2 * K * y))))
    half = int(math.floor(K * y * M + 1e-9))
    start = (Fraction(x0) if isinstance(x0, Fraction) else float(x0)) - (
        Fraction(half, M) if isinstance(x0, Fraction) else half / M)
    row, N = halfplane_row(coeffs, y, M, start)
    return np.abs(row[: 2 * half + 1]), N


def series_cone_scan(coeffs: CoefficientSequence, alpha, x0, js: Sequence[float] = DEFAULT_CONE_SCALES,
                     K: float = 8.0, n_sweep: int = 65) -> ScaleScan:
    """Cone scan of the closed-form transform C_alpha a^alpha (f(b + i a) - a_0).

    The sweep step is 1/M for a power of two M, so every level costs one FFT
    and rational centres keep exact phases. Scales whose truncation tail
    is not negligible are recorded as sentinels.
    """
    js = np.asarray(js, dtype=float)
    logC = math.log2(abs(wavelet_constant(alpha)))
    out, truncated = [], []
    for j in js:
        y = 2.0**-j
        row, N = _cone_row(coeffs, x0, y, K, n_sweep)
        peak = float(np.max(row))
        if halfplane_cutoff(coeffs, y) > coeffs.N and halfplane_tail(coeffs, y, N) > TAIL_TOLERANCE * peak:
            truncated.append(float(j))
            out.append(SENTINEL)
            continue
        out.append(logC + float(alpha) * -j + (math.log2(peak) if peak > 1e-300 else -math.inf))
    params = {"x0": str(x0), "alpha": str(alpha), "K": K, "sweep": n_sweep, "N": coeffs.N,
              "series": coeffs.name, "truncated_scales": truncated}
    return _check_degenerate(ScaleScan(js, -js, np.array(out), ScanKind.CONE, params))


# ---------------------------------------------------------------------------
# microlocal box scan


def microlocal_scan(coeffs: CoefficientSequence, alpha, x0, js: Sequence[float] | None = None,
                    levels_per_octave: int = 4, x_resolution: int = 8, depth: float = 0.25) -> ScaleScan:
    """log2 sup of y^alpha |f(x + iy) - a_0| over the box |x - x0| <= rho, 0 < y <= rho.

    At a cusp the vertical limit vanishes and the cone misses the mass that
    sits at heights y ~ rho^2; the box sees it. Heights are sampled down to
    depth * rho^2; a scale is only kept when every level it needs was
    resolved by the materialized coefficients.
    """
    if js is None:
        js = np.arange(2, 11, dtype=float)
    js = np.asarray(js, dtype=float)
    rhos = 2.0**-js
    l_lo = math.floor(levels_per_octave * js.min())
    l_hi = math.ceil(levels_per_octave * -math.log2(depth * rhos.min() ** 2))
    best = np.zeros(js.size)
    y_floor = 0.0
    for lvl in range(l_lo, l_hi + 1):
        y = 2.0 ** (-lvl / levels_per_octave)
        active = rhos >= y
        if not active.any():
            continue
        M = 1 << math.ceil(math.log2(x_resolution / y))
        row, N = halfplane_row(coeffs, y, M, x0)
        mag = np.abs(row)
        if halfplane_cutoff(coeffs, y) > coeffs.N and halfplane_tail(coeffs, y, N) > TAIL_TOLERANCE * mag.max():
            y_floor = y
            break
        kmax = min(M // 2, int(math.ceil(rhos.max() * M)))
        sym = np.maximum(mag[: kmax + 1], mag[(-np.arange(kmax + 1)) % M])
        run = np.maximum.accumulate(sym)
        kk = np.minimum(np.floor(rhos * M + 1e-9).astype(int), kmax)
        vals = run[kk] * y ** float(alpha)
        best = np.where(active, np.maximum(best, vals), best)
    ok = depth * rhos**2 >= y_floor
    out = np.where(ok, _log2(best), SENTINEL)
    out += math.log2(abs(wavelet_constant(alpha)))
    params = {"x0": str(x0), "alpha": str(alpha), "levels_per_octave": levels_per_octave,
              "depth": depth, "series": coeffs.name, "N": coeffs.N, "y_floor": y_floor}
    return _check_degenerate(ScaleScan(js, -js, out, ScanKind.MICROLOCAL, params))


# ---------------------------------------------------------------------------
# finite differences


def _noise_floor(values: np.ndarray, m: int) -> float:
    return 4.0 * 2.0**m * np.finfo(float).eps * float(np.max(np.abs(values), initial=0.0))


def oscillation_scan(evaluator: Callable[[np.ndarray], np.ndarray], x0: float, m: int,
                     js: Sequence[float] = tuple(range(4, 15)), sub: int = 8,
                     two_sided: bool = True) -> ScaleScan:
    """log2 max_{0 < h <= 2^-j} |Delta_h^m f(x0)| with a geometric sub-sweep of h.

    Differences below the rounding level of the samples count as zero.
    """
    if m < 1:
        raise ValueError("difference order must be at least 1")
    js = np.asarray(js, dtype=float)
    binom = np.array([math.comb(m, i) * (-1) ** (m - i) for i in range(m + 1)], dtype=float)
    steps = np.arange(m + 1)
    signs = (1.0, -1.0) if two_sided else (1.0,)
    per_j = []
    for j in js:
        h = 2.0**-j * 2.0 ** (-np.arange(sub) / sub)
        best = 0.0
        for sg in signs:
            pts = float(x0) + sg * h[:, None] * steps[None, :]
            f = np.asarray(evaluator(pts.ravel()), dtype=complex).reshape(pts.shape)
            d = np.abs(f @ binom)
            d[d <= _noise_floor(f, m)] = 0.0
            best = max(best, float(d.max()))
        per_j.append(best)
    # running max from the fine end: sup over all h <= h_j
    per_j = np.maximum.accumulate(np.array(per_j)[::-1])[::-1]
    return ScaleScan(js, -js, _log2(per_j, floor=0.0), ScanKind.OSCILLATION,
                     {"x0": float(x0), "m": m, "sub": sub})


@dataclass
class OrderedEstimate:
    """max over derivative orders k of k + min(1, s_k), with the per-order fits."""

    value: float
    stderr: float
    per_order: list = field(default_factory=list)
    stopped_at: int | None = None
    scans: list = field(default_factory=list)

    def best(self) -> ExponentEstimate | None:
        return max(self.per_order, key=lambda t: t[0] + min(1.0, t[1].slope))[1] if self.per_order else None


def _modulus_of_continuity(g: np.ndarray, L: int) -> np.ndarray:
    """omega(2^i) for i < L: max |g[n + 2^i] - g[n]| by index shifts."""
    return np.array([float(np.max(np.abs(g[(1 << i):] - g[: -(1 << i)]))) for i in range(L)])


def local_pair_scan(evaluator: Callable[[np.ndarray], np.ndarray], x0: float,
                    js: Sequence[float] = tuple(range(2, 7)), L: int = 20,
                    finest: int = 8, sampler=None) -> ScaleScan:
    """Per interval I_j = (x0 - 2^-j, x0 + 2^-j): the Hoelder exponent of g on I_j.

    g is sampled on 2^(L+1) + 1 points; the modulus of continuity at the
    finest ``finest`` dyadic separations is fitted on a log-log scale. The
    scan's modulus column holds these per-interval exponents (not logs).
    ``sampler(j, L)`` may replace point evaluation (returns the samples).
    """
    js = np.asarray(js, dtype=float)
    s_vals, r2s = [], []
    for j in js:
        r = 2.0**-j
        if sampler is not None:
            g = sampler(j, L)
        else:
            x = float(x0) + np.linspace(-r, r, (1 << (L + 1)) + 1)
            g = np.asarray(evaluator(x))
        Lj = int(round(math.log2((g.size - 1) / 2)))
        delta = r / (1 << Lj)
        if not np.all(np.isfinite(g)):
            s_vals.append(-math.inf)
            r2s.append(0.0)
            continue
        om = _modulus_of_continuity(g, min(finest, Lj))
        d = delta * 2.0 ** np.arange(om.size)
        if np.all(om <= _noise_floor(g, 1)):
            # locally constant at this resolution: as smooth as it gets
            s_vals.append(1.0)
            r2s.append(1.0)
            continue
        om = np.maximum(om, _noise_floor(g, 1))
        slope, _, _, r2 = ols(np.log2(d), np.log2(om))
        s_vals.append(slope)
        r2s.append(r2)
    s = np.array(s_vals)
    scan = ScaleScan(js, -js, np.where(np.isfinite(s), s, SENTINEL), ScanKind.LOCAL_PAIR,
                     {"x0": float(x0), "L": L, "finest": finest, "r2": [float(v) for v in r2s]})
    return scan


def interval_exponent(scan: ScaleScan, n_last: int = 4) -> ExponentEstimate:
    """Limit of the per-interval exponents: mean of the smallest intervals."""
    s = scan.log2_modulus
    ok = np.flatnonzero(np.isfinite(s))
    if ok.size < 4:
        raise FitError("fewer than 4 intervals resolved")
    use = ok[-max(4, n_last):]
    vals = s[use]
    r2 = float(np.mean(np.asarray(scan.params.get("r2", [1.0] * s.size))[use]))
    se = float(np.std(vals, ddof=1) / math.sqrt(vals.size))
    return ExponentEstimate(float(np.mean(vals)), se, r2, (float(scan.j[use[0]]), float(scan.j[use[-1]])),
                            int(vals.size))


def local_exponent(derivatives: Sequence[Callable], x0: float, js=tuple(range(2, 7)), L: int = 20,
                   samplers: Sequence | None = None, continuity: float = 0.05) -> OrderedEstimate:
    """beta** estimate: max over k of k + min(1, s_k) while f^(k) stays continuous."""
    out = OrderedEstimate(-math.inf, math.nan)
    for k, ev in enumerate(derivatives):
        scan = local_pair_scan(ev, x0, js, L, sampler=samplers[k] if samplers else None)
        out.scans.append(scan)
        try:
            est = interval_exponent(scan)
        except FitError:
            out.stopped_at = k
            break
        if est.slope <= continuity:
            out.stopped_at = k
            break
        out.per_order.append((k, est))
        cand = k + min(1.0, est.slope)
        if cand > out.value:
            out.value, out.stderr = cand, est.stderr
    if not out.per_order:
        raise FitError("no derivative order is continuous on the probed intervals")
    return out


def restricted_scan(evaluator: Callable, x0: float, js: Sequence[float] = tuple(range(4, 15)),
                    per_shell: int = 4096) -> ScaleScan | None:
    """log2 sup_{0 < |x - x0| <= 2^-j} |g(x) - g(x0)|; None if g(x0) is undefined."""
    g0 = complex(np.asarray(evaluator(np.array([float(x0)])))[0])
    if not np.isfinite(g0):
        return None
    js = np.asarray(js, dtype=float)
    shells = []
    u = (np.arange(per_shell) + 0.5) / per_shell
    for j in js:
        h = 2.0**-j
        t = h / 2 + (h / 2) * u
        x = np.concatenate([float(x0) + t, float(x0) - t])
        v = np.abs(np.asarray(evaluator(x), dtype=complex) - g0)
        shells.append(float(np.max(v)) if np.all(np.isfinite(v)) else math.inf)
    sup = np.maximum.accumulate(np.array(shells)[::-1])[::-1]
    if not np.all(np.isfinite(sup)):
        return None
    return ScaleScan(js, -js, _log2(sup, floor=0.0), ScanKind.RESTRICTED, {"x0": float(x0)})


def restricted_exponent(derivatives: Sequence[Callable], x0: float, js=tuple(range(4, 15)),
                        continuity: float = 0.05) -> OrderedEstimate:
    """beta* estimate: max over k of k + min(1, s_k), s_k the decay of sup|f^(k) - f^(k)(x0)|."""
    out = OrderedEstimate(-math.inf, math.nan)
    for k, ev in enumerate(derivatives):
        scan = restricted_scan(ev, x0, js)
        if scan is None:
            out.stopped_at = k
            break
        out.scans.append(scan)
        try:
            est = fit_slope(scan, finest=None)
        except FitError:
            # f^(k) - f^(k)(x0) vanishes identically: smooth at this order
            out.per_order.append((k, None))
            out.value = max(out.value, k + 1.0)
            continue
        if est.slope <= continuity:
            out.stopped_at = k
            break
        out.per_order.append((k, est))
        cand = k + min(1.0, est.slope)
        if cand > out.value:
            out.value, out.stderr = cand, est.stderr
    if out.value == -math.inf:
        raise FitError("f is not continuous at the point at this resolution")
    return out


# ---------------------------------------------------------------------------
# vertical limits


NOISE_FLOOR = 1e-13
DROP_BITS = 10.0


def upper_fit_points(x: np.ndarray, y: np.ndarray, trim_bits: float = 1.0, keep: float = 0.4,
                     max_iter: int = 20) -> np.ndarray:
    """Indices of the points on or near the upper envelope of a log-log cloud.

    Repeatedly fits a line and drops points more than ``trim_bits`` below
    it, never keeping fewer than ``keep`` of the points. The growth rate of
    a limsup is read off these points; transient dips do not bias it.
    """
    sel = np.arange(x.size)
    floor_n = max(4, int(math.ceil(keep * x.size)))
    for _ in range(max_iter):
        slope, icpt, _, _ = ols(x[sel], y[sel])
        resid = y - (icpt + slope * x)
        nxt = np.flatnonzero(resid >= -trim_bits)
        if nxt.size < floor_n:
            nxt = np.argsort(resid)[-floor_n:]
            nxt.sort()
        if np.array_equal(nxt, sel):
            break
        sel = nxt
    return sel


def vertical_scan(coeffs: CoefficientSequence, x0, js: Sequence[float] | None = None,
                  trim_bits: float = 1.0) -> tuple[ScaleScan, DecayFit]:
    """log2 |f(x0 + iy)| at y = 2^-j and the better of the two decay models.

    If the values collapse after their peak (to the cancellation floor, or
    by DROP_BITS), both models are fitted on the post-peak stretch.
    Otherwise they are fitted on the upper envelope of the points, so deep
    but transient dips (the vertical line passing close to a cusp) do not
    bias the growth exponent.
    """
    if js is None:
        js = np.arange(2.0, 16.0 + 1e-9, 0.25)
    js = np.asarray(js, dtype=float)
    vals = []
    for j in js:
        y = 2.0**-j
        N = halfplane_cutoff(coeffs, y)
        row, Nu = halfplane_row(coeffs, y, 1, x0, N)
        v = abs(complex(row[0]) + complex(coeffs.a0))
        floor = NOISE_FLOOR * halfplane_abs_sum(coeffs, y, Nu)
        if N > coeffs.N and halfplane_tail(coeffs, y, Nu) > TAIL_TOLERANCE * max(v, floor):
            v = -1.0
        elif v < floor:
            v = 0.0
        vals.append(v)
    vals = np.array(vals)
    resolved = vals >= 0
    lm = _log2(np.where(resolved, vals, 0.0), floor=0.0)
    scan = ScaleScan(js, -js, lm, ScanKind.VERTICAL,
                     {"x0": str(x0), "series": coeffs.name, "N": coeffs.N,
                      "unresolved_scales": [float(j) for j in js[~resolved]]})
    _check_degenerate(scan)
    usable = np.flatnonzero(scan.usable)
    peak = usable[np.argmax(lm[usable])]
    after = np.arange(peak, js.size)
    floor_hit = np.any(resolved[after] & ~scan.usable[after])
    if floor_hit or lm[peak] - lm[usable[-1]] >= DROP_BITS:
        idx = after[scan.usable[after]]
        mode = "post-peak"
    else:
        idx = usable[upper_fit_points(-js[usable], lm[usable], trim_bits)] if usable.size >= 4 else usable
        mode = "upper-envelope"
    if idx.size < 4:
        raise FitError("too few resolved heights for a decay fit")
    fit = select_decay_model(-js[idx], lm[idx], window=(float(js[idx[0]]), float(js[idx[-1]]), mode))
    scan.params["fit_mode"] = mode
    scan.params["fit_points"] = int(idx.size)
    return scan, fit


# ---------------------------------------------------------------------------
# coefficient-side checks


def partial_sum_growth(coeffs: CoefficientSequence, N_list: Sequence[int], M: int | None = None,
                       jitter: bool = True) -> tuple[ScaleScan, ExponentEstimate]:
    """log2 max_x |sum_{n <= N} a_n e(nx)| over an M-point grid; the slope estimates gamma.

    The scan is indexed by scale 1/N so that finer scales come later; the
    returned estimate's slope is the growth exponent (sign flipped).
    """
    N_list = sorted(int(n) for n in N_list)
    if N_list[-1] > coeffs.N:
        raise ValueError(f"N = {N_list[-1]} exceeds the {coeffs.N} materialized terms")
    M = M or 4 * N_list[-1]
    idx, vals = coeffs.support()
    shift = (math.sqrt(5) - 1) / 2 / M if jitter else 0.0
    out = []
    for N in N_list:
        cut = np.searchsorted(idx, N, side="right")
        c = _fold(idx[:cut] % M, vals[:cut] * (cis(idx[:cut], shift) if jitter else 1.0), M)
        out.append(float(np.max(np.abs(np.fft.ifft(c) * M))))
    lg = np.log2(np.array(N_list, dtype=float))
    scan = ScaleScan(lg, -lg, _log2(np.array(out)), ScanKind.PARTIAL_SUM,
                     {"series": coeffs.name, "M": M, "N_list": N_list})
    est = fit_slope(scan, finest=None)
    return scan, ExponentEstimate(-est.slope, est.stderr, est.r_squared, est.fit_range, est.n_points)


@dataclass(frozen=True)
class EnergyCheck:
    N_list: tuple
    ratios: tuple
    minimum: float
    maximum: float

    @property
    def band(self) -> float:
        return self.maximum / self.minimum if self.minimum > 0 else math.inf


def l2_energy_check(coeffs: CoefficientSequence, r, N_list: Sequence[int]) -> EnergyCheck:
    """sum_{k <= N} |a_k|^2 / N^r for each N."""
    a2 = np.cumsum(np.abs(np.asarray(coeffs.terms, dtype=complex)) ** 2)
    ratios = []
    for N in N_list:
        if N > coeffs.N:
            raise ValueError(f"N = {N} exceeds the {coeffs.N} materialized terms")
        ratios.append(float(a2[N - 1]) / float(N) ** float(r))
    return EnergyCheck(tuple(N_list), tuple(ratios), min(ratios), max(ratios))
