"""Elementary number-theoretic kernels.

Prime sieve, point counting on long Weierstrass curves over F_p, divisor
power sums and weighted two-square lattice sums. Everything works on
64-bit integers; results that would not fit raise ``OverflowError``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numba
import numpy as np

INT64_MAX = np.iinfo(np.int64).max


class EmptyDomainError(ValueError):
    pass


def sieve_primes(limit: int) -> list[int]:
    """Primes ``p <= limit`` in ascending order (Eratosthenes)."""
    if limit < 2:
        raise EmptyDomainError(f"no primes below {limit}")
    is_p = np.ones(limit + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_p[p]:
            is_p[p * p :: p] = False
    return np.flatnonzero(is_p).tolist()


def smallest_prime_factor(limit: int) -> np.ndarray:
    """spf[n] for 0 <= n <= limit (spf[0] = spf[1] = 0)."""
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, limit + 1):
        if spf[p] == 0:
            block = spf[p::p]
            block[block == 0] = p
            if p * p > limit:
                # remaining zeros are primes; mark them in one pass
                rest = np.flatnonzero(spf == 0)
                rest = rest[rest >= 2]
                spf[rest] = rest
                break
    return spf


@dataclass(frozen=True)
class WeierstrassCurve:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over the rationals."""

    a1: int
    a2: int
    a3: int
    a4: int
    a6: int

    def __post_init__(self):
        if self.discriminant == 0:
            raise ValueError(f"singular curve {self.coefficients}")

    @property
    def coefficients(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def b_invariants(self) -> tuple[int, int, int, int]:
        a1, a2, a3, a4, a6 = self.coefficients
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    @property
    def discriminant(self) -> int:
        b2, b4, b6, b8 = self.b_invariants
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def has_good_reduction(self, p: int) -> bool:
        return self.discriminant % p != 0


# y^2 + xy + y = x^3 + 4x - 6, conductor 14
E14 = WeierstrassCurve(1, 0, 1, 4, -6)


def _count_brute(curve: WeierstrassCurve, p: int) -> int:
    """Projective points of the nonsingular locus, by enumerating F_p^2."""
    a1, a2, a3, a4, a6 = (c % p for c in curve.coefficients)
    x = np.arange(p, dtype=np.int64)[:, None]
    y = np.arange(p, dtype=np.int64)[None, :]
    F = (y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6) % p
    on_curve = F == 0
    if curve.has_good_reduction(p):
        return int(on_curve.sum()) + 1
    Fx = (a1 * y - 3 * x * x - 2 * a2 * x - a4) % p
    Fy = (2 * y + a1 * x + a3) % p
    singular = on_curve & (Fx == 0) & (Fy == 0)
    return int(on_curve.sum() - singular.sum()) + 1


def curve_point_count(curve: WeierstrassCurve, p: int) -> int:
    """#E(F_p) for good p, #E_ns(F_p) for bad p; the point at infinity included.

    Odd good primes complete the square, (2y + a1 x + a3)^2 = 4x^3 + b2 x^2
    + 2 b4 x + b6, and look the right-hand side up in a table of squares,
    so the cost is O(p).
    """
    if p == 2 or not curve.has_good_reduction(p):
        return _count_brute(curve, p)
    b2, b4, b6, _ = curve.b_invariants
    return int(_count_odd_good(p, b2 % p, (2 * b4) % p, b6 % p))


@numba.njit(cache=True)
def _count_odd_good(p, b2, c1, b6):
    # roots[v] = number of y with y^2 = v (mod p)
    roots = np.zeros(p, dtype=np.int8)
    s = 0
    for x in range(p):
        roots[s] += 1
        s += 2 * x + 1
        while s >= p:
            s -= p
    # f(x) = 4x^3 + b2 x^2 + c1 x + b6 stepped by forward differences
    f = b6
    d1 = (4 + b2 + c1) % p
    d2 = (24 + 2 * b2) % p
    d3 = 24 % p
    total = 1
    for _ in range(p):
        total += roots[f]
        f += d1
        if f >= p:
            f -= p
        d1 += d2
        if d1 >= p:
            d1 -= p
        d2 += d3
        if d2 >= p:
            d2 -= p
    return total


def brute_point_count(curve: WeierstrassCurve, p: int) -> int:
    """O(p^2) reference count over all affine pairs (nonsingular ones for bad p)."""
    return _count_brute(curve, p)


def curve_ap(curve: WeierstrassCurve, p: int) -> int:
    n = curve_point_count(curve, p)
    if curve.has_good_reduction(p):
        return p + 1 - n
    return p - n


def _check_range(bound: float, what: str):
    if bound >= INT64_MAX:
        raise OverflowError(f"{what} exceeds the signed 64-bit range")


def divisor_power_sum_table(k_minus_1: int, N: int) -> np.ndarray:
    """Array ``t`` of length N+1 with ``t[n] = sigma_{k-1}(n)`` (t[0] = 0).

    Sieve over multiples, O(N log N). Raises ``OverflowError`` when the
    largest entry may not fit in int64.
    """
    if N < 1:
        raise ValueError("N must be positive")
    if k_minus_1 < 0:
        raise ValueError("exponent must be nonnegative")
    # sigma_s(n) <= zeta(s) n^s for s > 1, and <= n (1 + ln n) for s <= 1
    if k_minus_1 >= 2:
        bound = float(N) ** k_minus_1 * (1.0 + 1.0 / (k_minus_1 - 1))
    else:
        bound = float(N) ** max(k_minus_1, 0) * (1.0 + math.log(N)) * N
    _check_range(bound, f"sigma_{k_minus_1}({N})")
    table = np.zeros(N + 1, dtype=np.int64)
    for d in range(1, N + 1):
        table[d::d] += d**k_minus_1
    return table


Poly2 = Callable[[int, int], int]


def harmonic_quartic(x: int, y: int) -> int:
    return x**4 + y**4 - 6 * x * x * y * y


def two_square_weighted_sum(k: int, P: Poly2 = harmonic_quartic) -> int:
    """Sum of P(n, m) over all (n, m) in Z^2 with n^2 + m^2 = k."""
    if k < 1:
        raise ValueError("k must be positive")
    total = 0
    n = 0
    while n * n <= k:
        m2 = k - n * n
        m = math.isqrt(m2)
        if m * m == m2:
            for sn in {n, -n}:
                for sm in {m, -m}:
                    total += P(sn, sm)
        n += 1
    return total


def two_square_weighted_table(N: int, P=harmonic_quartic) -> np.ndarray:
    """All ``two_square_weighted_sum(k, P)`` for 0 <= k <= N in one lattice pass.

    ``P`` must accept int64 arrays. Entry 0 holds P(0, 0).
    """
    R = math.isqrt(N)
    n = np.arange(-R, R + 1, dtype=np.int64)
    table = np.zeros(N + 1, dtype=np.int64)
    # row by row keeps memory at O(sqrt N)
    for a in n:
        b = n[a * a + n * n <= N]
        vals = np.asarray(P(np.full_like(b, a), b), dtype=np.int64)
        np.add.at(table, a * a + b * b, vals)
    return table
