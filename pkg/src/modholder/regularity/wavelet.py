"""Analytic wavelet psi_alpha(x) = (x + i)^(-alpha-1) and its transform.

    W g(a, b) = a^alpha * integral g(t) (t - b - i a)^(-alpha-1) dt

For a Fourier series with coefficients a_n n^-alpha the transform has the
closed form C_alpha a^alpha (f(b + i a) - a_0); the quadrature routines
here are the independent check of that identity.
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction

import numpy as np
from scipy import integrate

from ..modcoeffs import CoefficientSequence
from ..series_eval import SeriesSpec, eval_grid_fft, eval_halfplane

TWO_PI = 2.0 * math.pi


class QuadratureError(ArithmeticError):
    pass


def wavelet_psi(alpha, x):
    """Principal branch of (x + i)^(-alpha-1)."""
    alpha = float(alpha)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    return np.power(np.asarray(x, dtype=float) + 1j, -alpha - 1.0)


def _quad(f, lo, hi, **kw):
    val, err, *rest = integrate.quad(f, lo, hi, limit=400, full_output=1, **kw)
    if len(rest) > 1 and "roundoff" not in str(rest[1]).lower() and err > 1e-9 * max(1.0, abs(val)):
        raise QuadratureError(f"quadrature did not converge: {rest[1]}")
    return val


def mode_transform_quadrature(lam: float, alpha, a: float, b: float) -> complex:
    """W applied to e(lam t) by adaptive quadrature on the whole line.

    Oscillatory infinite tails go through QUADPACK's Fourier routine; lam = 0
    is a plain integral.
    """
    if a <= 0:
        raise ValueError("scale must be positive")
    s = float(alpha) + 1.0
    w = b + 1j * a

    def h(t):
        return (t - w) ** -s

    def part(fun, **kw):
        return complex(_quad(lambda t: fun(t).real, 0, np.inf, **kw), _quad(lambda t: fun(t).imag, 0, np.inf, **kw))

    if lam == 0:
        total = part(h) + part(lambda t: h(-t))
    else:
        om = TWO_PI * abs(lam)
        sg = 1.0 if lam > 0 else -1.0
        # integral over t > 0 of h(t) e^{i sg om t} and of h(-t) e^{-i sg om t}
        c_pos = part(h, weight="cos", wvar=om)
        s_pos = part(h, weight="sin", wvar=om)
        c_neg = part(lambda t: h(-t), weight="cos", wvar=om)
        s_neg = part(lambda t: h(-t), weight="sin", wvar=om)
        total = (c_pos + 1j * sg * s_pos) + (c_neg - 1j * sg * s_neg)
    return complex(float(a) ** float(alpha) * total)


@functools.lru_cache(maxsize=64)
def _constant(alpha: Fraction) -> complex:
    return mode_transform_quadrature(1.0, alpha, 1.0, 0.0) / math.exp(-TWO_PI)


def wavelet_constant(alpha) -> complex:
    """C_alpha from one quadrature at (lam, a, b) = (1, 1, 0), cached per alpha."""
    alpha = Fraction(alpha)
    if alpha <= Fraction(1, 2):
        raise ValueError("wavelet constant needs alpha > 1/2")
    return _constant(alpha)


def wavelet_transform_series(coeffs: CoefficientSequence, alpha, a: float, b, N: int | None = None) -> complex:
    """Closed form C_alpha a^alpha (f(b + i a) - a_0)."""
    if a <= 0:
        raise ValueError("scale must be positive")
    fz = eval_halfplane(coeffs, b, a, N) - complex(coeffs.a0)
    return wavelet_constant(alpha) * float(a) ** float(alpha) * fz


# ---------------------------------------------------------------------------
# quadrature oracles


def _em_tail(v, s: float, M: int):
    """sum_{m > M} (v + m)^-s by Euler-Maclaurin from m = M (Re(v + M) >> 1)."""
    z = v + M
    f0 = z**-s
    f1 = -s * z ** (-s - 1)
    f3 = -s * (s + 1) * (s + 2) * z ** (-s - 3)
    return z ** (1 - s) / (s - 1) - f0 / 2 - f1 / 12 + f3 / 720


def periodized_kernel(alpha, t, a: float, b: float, M: int = 64):
    """sum over all integers m of (t + m - b - i a)^(-alpha-1)."""
    s = float(alpha) + 1.0
    u = np.asarray(t, dtype=float) - b - 1j * a
    m = np.arange(-M, M + 1)
    direct = np.sum((u[..., None] + m) ** -s, axis=-1)
    # (u - m)^-s = e^{i pi s} (m - u)^-s on the principal branch, since Im u < 0
    return direct + _em_tail(u, s, M) + np.exp(1j * math.pi * s) * _em_tail(-u, s, M)


def series_transform_quadrature(spec: SeriesSpec, a: float, b: float, N: int, P: int | None = None) -> complex:
    """W of the truncated periodic f_alpha by the trapezoid rule on one period.

    The integrand is periodic and analytic, so the rule is spectrally
    accurate once P resolves both the N modes and the kernel width a.
    """
    if a <= 0:
        raise ValueError("scale must be positive")
    if P is None:
        need = N + int(60 / a) + 64
        P = 1 << max(need, 2 * N + 2).bit_length()
    g = eval_grid_fft(spec, P, N).values
    t = np.arange(P) / P
    K = periodized_kernel(spec.alpha, t, a, b)
    return complex(float(a) ** float(spec.alpha) * np.mean(g * K))


def line_transform_quadrature(func, alpha, a: float, b: float, breakpoints=(), span: float = 1.0) -> complex:
    """W of a function on the real line (fixtures) by adaptive quadrature.

    ``breakpoints`` are the singular points of ``func``; the integral is
    split there and within +-span of b, with infinite tails outside.
    """
    if a <= 0:
        raise ValueError("scale must be positive")
    s = float(alpha) + 1.0
    w = b + 1j * a
    pts = sorted({b - span, b + span, *[p for p in breakpoints if b - span < p < b + span]})

    def integrand(t):
        return func(t) * (t - w) ** -s

    pieces = [(-np.inf, pts[0])] + list(zip(pts[:-1], pts[1:])) + [(pts[-1], np.inf)]
    total = 0j
    for lo, hi in pieces:
        total += _quad(lambda t: complex(integrand(t)).real, lo, hi)
        total += 1j * _quad(lambda t: complex(integrand(t)).imag, lo, hi)
    return complex(float(a) ** float(alpha) * total)
