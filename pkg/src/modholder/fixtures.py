"""Closed-form test functions with known exponent triples.

power_cusp    |x - x0|^s                     (s, s, s) at x0
chirp4        x^4 sin(x^-2), 0 at 0           (4, 2, 4/3) at 0
extreme_chirp exp(-x^-2) sin(exp(x^-4))       (inf, 1, 0) at 0
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

INF = math.inf


class FixtureKind(str, enum.Enum):
    POWER_CUSP = "power_cusp"
    CHIRP4 = "chirp4"
    EXTREME_CHIRP = "extreme_chirp"


@dataclass(frozen=True)
class Fixture:
    kind: FixtureKind
    s: Fraction = Fraction(1, 2)
    x0: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", FixtureKind(self.kind))
        object.__setattr__(self, "s", Fraction(self.s))
        if self.kind is FixtureKind.POWER_CUSP and self.s <= 0:
            raise ValueError("power_cusp needs s > 0")

    @property
    def point(self) -> float:
        return self.x0 if self.kind is FixtureKind.POWER_CUSP else 0.0

    def __call__(self, x):
        return self.derivative(0, x)

    def derivative(self, k: int, x):
        """k-th derivative in closed form (k <= 2 for the chirps)."""
        x = np.asarray(x, dtype=float)
        if self.kind is FixtureKind.POWER_CUSP:
            return _power_cusp(k, x - self.x0, float(self.s))
        if self.kind is FixtureKind.CHIRP4:
            return _chirp4(k, x)
        return _extreme_chirp(k, x)


def _power_cusp(k, u, s):
    # d^k |u|^s = s(s-1)...(s-k+1) |u|^(s-k) sign(u)^k
    coef = math.prod(s - i for i in range(k))
    au = np.abs(u)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = coef * au ** (s - k) * np.sign(u) ** k
    return np.where(au == 0, 0.0 if s > k else np.nan, out)


def _chirp4(k, x):
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        t = x ** -2.0
        sn, cs = np.sin(t), np.cos(t)
        if k == 0:
            out = x**4 * sn
        elif k == 1:
            out = 4 * x**3 * sn - 2 * x * cs
        elif k == 2:
            out = 12 * x**2 * sn - 10 * cs - 4 * x ** -2.0 * sn
        else:
            raise ValueError("chirp4 derivatives are provided up to order 2")
    return np.where(x == 0, 0.0 if k < 2 else np.nan, out)


def _extreme_chirp(k, x):
    with np.errstate(divide="ignore", invalid="ignore", over="ignore", under="ignore"):
        u = x ** -2.0
        env = np.exp(-u)
        inner = np.exp(u * u)
        if k == 0:
            out = env * np.sin(inner)
        elif k == 1:
            # d/dx exp(-x^-2) = 2 x^-3 exp(-x^-2);  d/dx exp(x^-4) = -4 x^-5 exp(x^-4)
            out = 2 * x**-3.0 * env * np.sin(inner) - 4 * x**-5.0 * env * inner * np.cos(inner)
        else:
            raise ValueError("extreme_chirp derivatives are provided up to order 1")
        out = np.where(np.isfinite(out), out, np.nan)
    return np.where(x == 0, 0.0 if k == 0 else np.nan, out)


def fixture_exponents(fixture: Fixture) -> tuple:
    """(beta, beta_star, beta_starstar) at the distinguished point; math.inf for infinity."""
    if fixture.kind is FixtureKind.POWER_CUSP:
        s = fixture.s
        return (s, s, s)
    if fixture.kind is FixtureKind.CHIRP4:
        return (Fraction(4), Fraction(2), Fraction(4, 3))
    return (INF, Fraction(1), Fraction(0))


def fixture_from_name(name: str) -> Fixture:
    """'chirp4', 'extreme_chirp', 'power_cusp' or 'power_cusp:s' / 'power_cusp:s@x0'."""
    if name.startswith("power_cusp"):
        rest = name[len("power_cusp"):].lstrip(":")
        s, x0 = Fraction(1, 2), 0.0
        if rest:
            if "@" in rest:
                rest, x0s = rest.split("@", 1)
                x0 = float(Fraction(x0s))
            if rest:
                s = Fraction(rest)
        return Fixture(FixtureKind.POWER_CUSP, s, x0)
    return Fixture(FixtureKind(name))
