"""Evaluation of fractional integrals f_alpha and of the half-plane extension.

    f_alpha(x)   = sum_{n != 0} a_n |n|^-alpha e(nx),          e(x) = exp(2 pi i x)
    f_alpha^c(x) = sum_{n >= 1} a_n n^-alpha cos(2 pi n x)
    f_alpha^s(x) = sum_{n >= 1} a_n n^-alpha sin(2 pi n x)
    f(x + iy)    = sum_n a_n e(nx) exp(-2 pi |n| y)

Points may be floats or ``Fraction``; for fractions the phases n*x mod 1
are reduced exactly in integer arithmetic, which matters when a sum is
expected to cancel to far below double precision (cusps).
"""

from __future__ import annotations

import csv
import enum
import io
import logging
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real

import numpy as np

from .modcoeffs import CoefficientSequence, ResourceError

log = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
GOLDEN_JITTER = (math.sqrt(5.0) - 1.0) / 2.0
# relative size of the neglected half-plane tail
HALFPLANE_EPS = 1e-15


class Flavor(str, enum.Enum):
    COMPLEX = "complex"
    COSINE = "cosine"
    SINE = "sine"


class AliasingError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SeriesSpec:
    """Coefficients + smoothing exponent alpha + flavor (+ optional derivative order)."""

    coeffs: CoefficientSequence
    alpha: Fraction
    flavor: Flavor = Flavor.COMPLEX
    derivative: int = 0

    def __post_init__(self):
        alpha = Fraction(self.alpha).limit_denominator(10**6) if isinstance(self.alpha, float) else Fraction(self.alpha)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "flavor", Flavor(self.flavor))
        if self.derivative < 0:
            raise ValueError("derivative order must be nonnegative")
        if alpha - self.derivative <= self.coeffs.growth_exponent:
            raise ValueError(
                f"alpha - k = {alpha - self.derivative} must exceed the growth exponent "
                f"{self.coeffs.growth_exponent} of {self.coeffs.name}"
            )
        if self.flavor is not Flavor.COMPLEX and not (self.coeffs.is_real and self.coeffs.one_sided):
            raise ValueError("cosine/sine flavors need real one-sided coefficients")
        if alpha - self.derivative <= self.coeffs.convergence_threshold:
            warnings.warn(
                f"alpha - k = {alpha - self.derivative} is at or below the absolute-convergence "
                f"threshold {self.coeffs.convergence_threshold} of {self.coeffs.name}; "
                "values rely on the partial-sum tail bound",
                RuntimeWarning,
                stacklevel=2,
            )

    def with_flavor(self, flavor) -> "SeriesSpec":
        return SeriesSpec(self.coeffs, self.alpha, Flavor(flavor), self.derivative)

    def with_derivative(self, k: int) -> "SeriesSpec":
        return SeriesSpec(self.coeffs, self.alpha, self.flavor, k)

    def weighted(self, N: int | None = None, side: int = 1) -> tuple[np.ndarray, np.ndarray]:
        """(n, b_n) with b_n = a_n n^-alpha (2 pi i n)^k over nonzero terms, 0 < n <= N.

        ``side=-1`` gives the negative-index terms, still indexed by n > 0
        (so the frequency is -n).
        """
        if side > 0:
            idx, vals = self.coeffs.support(N)
        else:
            neg = self.coeffs.negative_terms
            if neg is None:
                return np.zeros(0, dtype=np.int64), np.zeros(0)
            cut = neg.size if N is None else min(N, neg.size)
            idx = np.flatnonzero(neg[:cut]) + 1
            vals = neg[idx - 1]
        b = vals / idx.astype(float) ** float(self.alpha)
        if self.derivative:
            b = b * (side * TWO_PI * 1j * idx) ** self.derivative
        return idx, b


@dataclass
class SampleGrid:
    x_start: float
    step: float
    count: int
    values: np.ndarray
    truncation_N: int
    tail_bound: float = float("nan")
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.values) != self.count:
            raise ValueError("grid has the wrong number of samples")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("non-finite grid values")

    @property
    def x(self) -> np.ndarray:
        return self.x_start + self.step * np.arange(self.count)


# ---------------------------------------------------------------------------
# phases


def phases(n: np.ndarray, x) -> np.ndarray:
    """n*x mod 1, exactly for Fraction x with a moderate denominator."""
    if isinstance(x, Fraction) and x.denominator < 2**31:
        p, q = x.numerator % x.denominator, x.denominator
        return (n.astype(np.int64) * p % q) / q
    return np.mod(n * float(x), 1.0)


def cis(n: np.ndarray, x) -> np.ndarray:
    return np.exp(1j * TWO_PI * phases(n, x))


def _check_N(spec: SeriesSpec, N: int):
    if N < 1:
        raise ValueError("N must be positive")
    if N > spec.coeffs.N:
        raise ResourceError(f"{spec.coeffs.name} is materialized to {spec.coeffs.N} < {N}")


def _combine(spec: SeriesSpec, pos: complex, neg: complex):
    if spec.flavor is Flavor.COMPLEX:
        return pos + neg
    if spec.flavor is Flavor.COSINE:
        return (pos + np.conj(pos)) / 2 if spec.coeffs.is_real and spec.derivative == 0 else None
    return None


# ---------------------------------------------------------------------------
# f_alpha on points


def eval_point(spec: SeriesSpec, x, N: int):
    """Partial sum over 0 < |n| <= N, terms accumulated in ascending n (fsum)."""
    _check_N(spec, N)
    idx, b = spec.weighted(N)
    if spec.flavor is Flavor.COMPLEX:
        terms = b * cis(idx, x)
        nidx, nb = spec.weighted(N, side=-1)
        if nidx.size:
            terms = np.concatenate([terms, nb * cis(-nidx, x)])
        return complex(math.fsum(terms.real), math.fsum(terms.imag))
    ph = TWO_PI * phases(idx, x)
    trig = np.cos(ph) if spec.flavor is Flavor.COSINE else np.sin(ph)
    if spec.derivative:
        # d^k/dx^k of cos/sin(2 pi n x) as the real part of the complex derivative
        k = spec.derivative
        shift = np.pi / 2 * k
        trig = np.cos(ph + shift) if spec.flavor is Flavor.COSINE else np.sin(ph + shift)
        terms = spec.coeffs.support(N)[1] / idx.astype(float) ** float(spec.alpha) * (TWO_PI * idx) ** k * trig
    else:
        terms = b * trig
    if np.iscomplexobj(terms):
        return complex(math.fsum(terms.real), math.fsum(terms.imag))
    return math.fsum(terms)


def _direct_block(spec: SeriesSpec, x: np.ndarray, N: int, chunk: int = 1 << 22) -> np.ndarray:
    idx, b = spec.weighted(N)
    nidx, nb = spec.weighted(N, side=-1)
    out = np.zeros(x.size, dtype=complex)
    rows = max(1, chunk // max(idx.size, 1))
    k = spec.derivative
    for s in range(0, x.size, rows):
        xs = x[s : s + rows, None]
        ph = TWO_PI * np.mod(idx[None, :] * xs, 1.0)
        if spec.flavor is Flavor.COMPLEX:
            acc = np.exp(1j * ph) @ b
            if nidx.size:
                acc += np.exp(-1j * TWO_PI * np.mod(nidx[None, :] * xs, 1.0)) @ nb
        else:
            base = spec.coeffs.support(N)[1] / idx.astype(float) ** float(spec.alpha) * (TWO_PI * idx) ** k
            shift = np.pi / 2 * k
            trig = np.cos(ph + shift) if spec.flavor is Flavor.COSINE else np.sin(ph + shift)
            acc = trig @ base
        out[s : s + rows] = acc
    return out


def eval_grid_direct(spec: SeriesSpec, x_start: float, step: float, count: int, N: int,
                     jitter: bool = False) -> SampleGrid:
    """Reference O(N * count) evaluation on x_start + j*step."""
    _check_N(spec, N)
    if step <= 0 or count < 1:
        raise ValueError("need a positive step and count")
    if jitter:
        x_start = x_start + GOLDEN_JITTER * step
    x = x_start + step * np.arange(count)
    vals = _direct_block(spec, x, N)
    if spec.flavor is not Flavor.COMPLEX:
        vals = vals.real if spec.coeffs.is_real else vals
    return SampleGrid(float(x_start), float(step), count, vals, N)


def eval_grid_fft(spec: SeriesSpec, M: int, N: int, x_start=0.0, jitter: bool = False) -> SampleGrid:
    """All samples at x_start + j/M, j < M, from one inverse FFT.

    The weighted coefficients are placed in bin n mod M (and -n mod M for
    the conjugate half), so M >= 2N + 2 keeps every frequency in its own bin.
    """
    _check_N(spec, N)
    if M < 2 * N + 2:
        raise AliasingError(f"M = {M} < 2N + 2 = {2 * N + 2}: frequencies would alias")
    if jitter:
        x_start = float(x_start) + GOLDEN_JITTER / M
    idx, b = spec.weighted(N)
    tw = cis(idx, x_start) if x_start != 0 else 1.0
    c = np.zeros(M, dtype=complex)
    if spec.flavor is Flavor.COMPLEX:
        c[idx] = b * tw
        nidx, nb = spec.weighted(N, side=-1)
        if nidx.size:
            c[(-nidx) % M] += nb * (np.conj(cis(nidx, x_start)) if x_start != 0 else 1.0)
    else:
        # cos = (e + e^-)/2 and sin = (e - e^-)/(2i), both taken for b_n real-weighted
        k = spec.derivative
        base = spec.coeffs.support(N)[1] / idx.astype(float) ** float(spec.alpha) * (TWO_PI * idx) ** k
        rot = np.exp(1j * np.pi / 2 * k)
        if spec.flavor is Flavor.COSINE:
            plus, minus = rot / 2, np.conj(rot) / 2
        else:
            plus, minus = rot / 2j, -np.conj(rot) / 2j
        c[idx] = base * plus * tw
        c[(-idx) % M] += base * minus * (np.conj(tw) if x_start != 0 else 1.0)
    vals = np.fft.ifft(c) * M
    if spec.flavor is not Flavor.COMPLEX and spec.coeffs.is_real:
        vals = vals.real
    return SampleGrid(float(x_start), 1.0 / M, M, vals, N)


# ---------------------------------------------------------------------------
# truncation


@dataclass(frozen=True)
class TailModel:
    """Empirical tail law |f_alpha - S_N| <= C * N^(gamma - alpha)."""

    constant: float
    exponent: float
    calibration_N: int


_TAIL_CACHE: dict = {}


def calibrate_tail(spec: SeriesSpec, N0: int | None = None, probes: int = 64,
                   safety: float = 2.0) -> TailModel:
    """Fit C from the largest N vs 2N partial-sum difference on a probe grid.

    Under the power law the tail beyond N is the geometric sum of the
    dyadic increments, D(N) / (1 - 2^(gamma - alpha)).
    """
    key = (id(spec.coeffs), spec.alpha, spec.flavor, spec.derivative, N0, probes)
    if key in _TAIL_CACHE:
        return _TAIL_CACHE[key]
    e = float(spec.coeffs.growth_exponent - (spec.alpha - spec.derivative))
    N0 = N0 or max(1, spec.coeffs.N // 2)
    x = (np.arange(probes) + GOLDEN_JITTER) / probes
    lo = _direct_block(spec, x, N0)
    hi = _direct_block(spec, x, min(2 * N0, spec.coeffs.N))
    D = float(np.max(np.abs(hi - lo)))
    C = safety * D / (N0**e * (1.0 - 2.0**e))
    model = TailModel(C, e, N0)
    _TAIL_CACHE[key] = model
    return model


def truncation_length(spec: SeriesSpec, eps: float, model: TailModel | None = None) -> tuple[int, float]:
    """Smallest N with C N^(gamma-alpha) <= eps, and that bound."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    model = model or calibrate_tail(spec)
    if model.constant <= eps:
        return 1, model.constant
    N = math.ceil((eps / model.constant) ** (1.0 / model.exponent))
    # guard against ceil/rounding putting the bound a hair above eps
    while model.constant * N**model.exponent > eps:
        N += 1
    if N > spec.coeffs.N:
        best = model.constant * spec.coeffs.N**model.exponent
        raise ResourceError(
            f"eps = {eps:g} needs N = {N} > {spec.coeffs.N} materialized terms; "
            f"achievable eps is {best:.3g}"
        )
    return N, model.constant * N**model.exponent


# ---------------------------------------------------------------------------
# upper half-plane


def halfplane_cutoff(coeffs: CoefficientSequence, y: float) -> int:
    """N with exp(-2 pi N y) * max|a_n| < 1e-15 (may exceed the materialized length)."""
    amax = max(coeffs.max_abs(), 1.0)
    return max(1, math.ceil((math.log(amax) - math.log(HALFPLANE_EPS)) / (TWO_PI * y)))


def halfplane_tail(coeffs: CoefficientSequence, y: float, N: int) -> float:
    """Rough bound of the neglected sum_{n > N} |a_n| e^{-2 pi n y}, using max|a_n| as the size proxy."""
    amax = coeffs.max_abs()
    return amax * math.exp(-TWO_PI * (N + 1) * y) / -math.expm1(-TWO_PI * y)


def _halfplane_terms(coeffs: CoefficientSequence, y: float, N: int | None):
    if y <= 0:
        raise ValueError(f"y = {y} is not in the upper half-plane")
    if N is None:
        N = halfplane_cutoff(coeffs, y)
    N = min(N, coeffs.N)
    idx, vals = coeffs.support(N)
    w = vals * np.exp(-TWO_PI * idx * y)
    return idx, w, N


def eval_halfplane(coeffs: CoefficientSequence, x, y: float, N: int | None = None) -> complex:
    """a_0 + sum_{n=1}^N a_n e(nx) e^{-2 pi n y}; N chosen from y when omitted."""
    idx, w, N = _halfplane_terms(coeffs, y, N)
    terms = w * cis(idx, x)
    total = complex(terms.sum()) + complex(coeffs.a0)
    neg = coeffs.negative_terms
    if neg is not None:
        nidx = np.flatnonzero(neg[:N]) + 1
        total += complex(np.sum(neg[nidx - 1] * np.exp(-TWO_PI * nidx * y) * np.conj(cis(nidx, x))))
    return total


def halfplane_abs_sum(coeffs: CoefficientSequence, y: float, N: int | None = None) -> float:
    """|a_0| + sum |a_n| e^{-2 pi n y}: the triangle-inequality majorant."""
    _, w, _ = _halfplane_terms(coeffs, y, N)
    return float(np.sum(np.abs(w))) + abs(complex(coeffs.a0))


def halfplane_row(coeffs: CoefficientSequence, y: float, M: int, x_start=0.0,
                  N: int | None = None) -> tuple[np.ndarray, int]:
    """f(x + iy) - a_0 at x = x_start + j/M for all j < M, one FFT.

    Frequencies are folded mod M; that is exact at the sample points, so M
    only sets the x-resolution. Returns (values, N used).
    """
    idx, w, N = _halfplane_terms(coeffs, y, N)
    if x_start != 0:
        w = w * cis(idx, x_start)
    c = _fold(idx % M, w, M)
    if coeffs.negative_terms is not None:
        neg = coeffs.negative_terms
        nidx = np.flatnonzero(neg[:N]) + 1
        nw = neg[nidx - 1] * np.exp(-TWO_PI * nidx * y) * np.conj(cis(nidx, x_start))
        c += _fold((-nidx) % M, nw, M)
    return np.fft.ifft(c) * M, N


def _fold(bins: np.ndarray, w: np.ndarray, M: int) -> np.ndarray:
    w = np.asarray(w, dtype=complex)
    return np.bincount(bins, w.real, M) + 1j * np.bincount(bins, w.imag, M)


# ---------------------------------------------------------------------------
# Poisson kernel


def poisson_kernel(r: float, t):
    """(1 - r^2) / (1 - 2 r cos(2 pi t) + r^2) for 0 <= r < 1."""
    if not 0 <= r < 1:
        raise ValueError(f"Poisson kernel needs 0 <= r < 1, got {r}")
    t = np.asarray(t, dtype=float)
    return (1 - r * r) / (1 - 2 * r * np.cos(TWO_PI * t) + r * r)


# ---------------------------------------------------------------------------
# output


def grid_csv(grid: SampleGrid) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "re", "im"])
    vals = np.asarray(grid.values, dtype=complex)
    for x, v in zip(grid.x, vals):
        w.writerow([f"{x:.17g}", f"{v.real:.17g}", f"{v.imag:.17g}"])
    return buf.getvalue()


def as_point(x):
    """Coerce '1/3', Fraction, int or float to Fraction (rationals) or float."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, Real):
        return float(x)
    raise TypeError(f"cannot interpret {x!r} as a point")


def eval_points(spec: SeriesSpec, x, N: int) -> np.ndarray:
    """Vectorized partial sums at arbitrary points (fixed ascending-n order per sample)."""
    _check_N(spec, N)
    x = np.asarray(x, dtype=float)
    vals = _direct_block(spec, x.ravel(), N).reshape(x.shape)
    if spec.flavor is not Flavor.COMPLEX and spec.coeffs.is_real:
        return vals.real
    return vals
