"""Fourier coefficients of the built-in modular forms.

Five sequences are available: the weight-2 newform attached to the
conductor-14 elliptic curve, the weight-1/2 eta-type theta cusp form
(character mod 12 on squares), the Jacobi theta function, the weight-5
harmonic theta series for x^4 + y^4 - 6x^2y^2 and the Eisenstein series
of weight k. Each comes with its modular metadata; weights and exponents
are kept as ``Fraction`` so that exponent predictions stay exact.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping

import numpy as np

from . import numtheory as nt

ELLIPTIC_CAP = 2**17
HARMONIC_CAP = 2**20


class ResourceError(RuntimeError):
    """Requested size exceeds what the artifact materializes."""


class CuspRule(str, enum.Enum):
    ALL_CUSPIDAL = "all-cuspidal"
    GAMMA0_4_THETA = "gamma0_4-theta"
    FULL_MODULAR_NONCUSPIDAL = "full-modular-noncuspidal"


class CuspKind(str, enum.Enum):
    CUSPIDAL = "Cuspidal"
    NOT_CUSPIDAL = "NotCuspidal"


@dataclass(frozen=True)
class CuspBehavior:
    kind: CuspKind

    @property
    def decay_constant_expected(self) -> bool:
        """Exponential decay of vertical limits is expected iff cuspidal."""
        return self.kind is CuspKind.CUSPIDAL


@dataclass(frozen=True, eq=False)
class CoefficientSequence:
    """Finitely materialized a_1..a_N plus a_0 and modular metadata.

    ``terms[n - 1]`` is a_n. Sequences are one-sided unless
    ``negative_terms`` is given (``negative_terms[n - 1]`` is a_{-n}).
    """

    name: str
    terms: np.ndarray
    weight: Fraction
    growth_exponent: Fraction
    is_cusp_form: bool
    cusp_rule: CuspRule | None
    convergence_threshold: Fraction
    a0: complex = 0.0
    negative_terms: np.ndarray | None = None
    _support: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        terms = np.asarray(self.terms)
        if terms.ndim != 1 or terms.size < 1:
            raise ValueError("need at least one coefficient")
        if not np.all(np.isfinite(terms)):
            raise ValueError("coefficients must be finite")
        if self.is_cusp_form and self.a0 != 0:
            raise ValueError("a cusp form has a_0 = 0")
        if self.is_cusp_form and self.growth_exponent != self.weight / 2:
            raise ValueError("cusp forms have growth exponent r/2")
        terms.setflags(write=False)
        object.__setattr__(self, "terms", terms)

    @property
    def N(self) -> int:
        return self.terms.size

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.terms) or bool(np.all(self.terms.imag == 0))

    @property
    def one_sided(self) -> bool:
        return self.negative_terms is None

    def a(self, n: int):
        if n == 0:
            return self.a0
        if n < 0:
            if self.negative_terms is None or -n > self.negative_terms.size:
                return 0
            return self.negative_terms[-n - 1]
        return self.terms[n - 1]

    def support(self, N: int | None = None) -> tuple[np.ndarray, np.ndarray]:
        """Indices n in [1, N] with a_n != 0, and the matching values."""
        N = self.N if N is None else min(N, self.N)
        if "all" not in self._support:
            idx = np.flatnonzero(self.terms) + 1
            self._support["all"] = (idx, self.terms[idx - 1])
        idx, vals = self._support["all"]
        cut = np.searchsorted(idx, N, side="right")
        return idx[:cut], vals[:cut]

    def max_abs(self, N: int | None = None) -> float:
        _, vals = self.support(N)
        return float(np.max(np.abs(vals))) if vals.size else 0.0

    def truncated(self, N: int) -> "CoefficientSequence":
        if N > self.N:
            raise ResourceError(f"{self.name} has only {self.N} terms, asked for {N}")
        return CoefficientSequence(
            self.name, self.terms[:N], self.weight, self.growth_exponent,
            self.is_cusp_form, self.cusp_rule, self.convergence_threshold,
            self.a0, self.negative_terms,
        )


# ---------------------------------------------------------------------------
# Hecke extension


def hecke_extend(
    prime_values: Mapping[int, int],
    bad_primes,
    weight: int,
    N: int,
) -> np.ndarray:
    """Extend prime coefficients multiplicatively to a_1..a_N (int64 array).

    Good p: a_{p^{j+1}} = a_p a_{p^j} - p^{weight-1} a_{p^{j-1}}.
    Bad p: a_{p^j} = a_p^j.
    """
    bad = set(bad_primes)
    a = np.zeros(N + 1, dtype=object)
    a[1] = 1
    if N >= 2:
        spf = nt.smallest_prime_factor(N)
    for n in range(2, N + 1):
        p = int(spf[n])
        m, pe = n, 1
        while m % p == 0:
            m //= p
            pe *= p
        if m > 1:
            a[n] = a[m] * a[pe]
            continue
        # n is a prime power p^j
        if p not in prime_values:
            raise KeyError(f"missing coefficient for prime {p}")
        ap = int(prime_values[p])
        if n == p:
            a[n] = ap
        elif p in bad:
            a[n] = ap * a[n // p]
        else:
            a[n] = ap * a[n // p] - p ** (weight - 1) * a[n // (p * p)]
    out = a[1:]
    if any(abs(int(v)) > nt.INT64_MAX for v in out):
        raise OverflowError("Hecke extension exceeds int64")
    return out.astype(np.int64)


def curve_bad_primes(curve: nt.WeierstrassCurve) -> set[int]:
    d = abs(curve.discriminant)
    bad, p = set(), 2
    while p * p <= d:
        while d % p == 0:
            bad.add(p)
            d //= p
        p += 1
    if d > 1:
        bad.add(d)
    return bad


def elliptic_sequence(curve: nt.WeierstrassCurve, N: int, name: str) -> np.ndarray:
    if N > ELLIPTIC_CAP:
        raise ResourceError(f"N = {N} exceeds the cap {ELLIPTIC_CAP} for point counting")
    primes = nt.sieve_primes(N) if N >= 2 else []
    ap = {p: nt.curve_ap(curve, p) for p in primes}
    return hecke_extend(ap, curve_bad_primes(curve) & set(primes), 2, N)


def elliptic14_sequence(N: int) -> CoefficientSequence:
    terms = elliptic_sequence(nt.E14, N, "elliptic14")
    return CoefficientSequence(
        "elliptic14", terms, Fraction(2), Fraction(1), True,
        CuspRule.ALL_CUSPIDAL, Fraction(3, 2),
    )


def theta12_character(n):
    """+1 for n = +-1 mod 12, -1 for n = +-5 mod 12, 0 otherwise."""
    r = np.asarray(n) % 12
    return np.where((r == 1) | (r == 11), 1, np.where((r == 5) | (r == 7), -1, 0))


def theta12_sequence(N: int) -> CoefficientSequence:
    if N < 1:
        raise ValueError("N must be positive")
    terms = np.zeros(N, dtype=np.int64)
    n = np.arange(1, math.isqrt(N) + 1)
    terms[n * n - 1] = theta12_character(n)
    return CoefficientSequence(
        "theta12", terms, Fraction(1, 2), Fraction(1, 4), True,
        CuspRule.ALL_CUSPIDAL, Fraction(1, 4),
    )


def jacobi_theta_sequence(N: int) -> CoefficientSequence:
    if N < 1:
        raise ValueError("N must be positive")
    terms = np.zeros(N, dtype=np.int64)
    n = np.arange(1, math.isqrt(N) + 1)
    terms[n * n - 1] = 2
    return CoefficientSequence(
        "jacobi", terms, Fraction(1, 2), Fraction(1, 4), False,
        CuspRule.GAMMA0_4_THETA, Fraction(1, 4), a0=1.0,
    )


def harmonic_theta_sequence(N: int) -> CoefficientSequence:
    if N > HARMONIC_CAP:
        raise ResourceError(f"N = {N} exceeds the cap {HARMONIC_CAP}")
    if N < 1:
        raise ValueError("N must be positive")
    table = nt.two_square_weighted_table(N)
    # P(0,0) = 0, so a_0 vanishes as a cusp form requires
    return CoefficientSequence(
        "harmonic", table[1:], Fraction(5), Fraction(5, 2), True,
        CuspRule.ALL_CUSPIDAL, Fraction(5, 2),
    )


# -B_k / 2k, the constant term making sum sigma_{k-1}(n) q^n modular
_EISENSTEIN_A0 = {4: Fraction(1, 240), 6: Fraction(-1, 504), 8: Fraction(1, 480)}


def eisenstein_sequence(k: int, N: int) -> CoefficientSequence:
    if k % 2 or not 4 <= k <= 8:
        raise ValueError(f"Eisenstein weight must be even in [4, 8], got {k}")
    terms = nt.divisor_power_sum_table(k - 1, N)[1:]
    return CoefficientSequence(
        f"eisenstein{k}", terms, Fraction(k), Fraction(k), False,
        CuspRule.FULL_MODULAR_NONCUSPIDAL, Fraction(k), a0=float(_EISENSTEIN_A0[k]),
    )


def classify_rational_point(seq: CoefficientSequence, p: int, q: int) -> CuspBehavior:
    if q <= 0:
        raise ValueError("denominator must be positive")
    if math.gcd(p, q) != 1:
        raise ValueError(f"{p}/{q} is not reduced")
    rule = seq.cusp_rule
    if rule is CuspRule.ALL_CUSPIDAL:
        return CuspBehavior(CuspKind.CUSPIDAL)
    if rule is CuspRule.FULL_MODULAR_NONCUSPIDAL:
        return CuspBehavior(CuspKind.NOT_CUSPIDAL)
    if rule is CuspRule.GAMMA0_4_THETA:
        if q % 4 == 2:
            return CuspBehavior(CuspKind.CUSPIDAL)
        return CuspBehavior(CuspKind.NOT_CUSPIDAL)
    raise ValueError(f"sequence {seq.name} carries no cusp rule")


# ---------------------------------------------------------------------------
# registry and cache files

BUILTIN_N = {
    "elliptic14": ELLIPTIC_CAP,
    "theta12": 2**20,
    "jacobi": 2**20,
    "harmonic": HARMONIC_CAP,
    "eisenstein4": 2**20,
    "eisenstein6": 2**12,
    "eisenstein8": 400,
}


def builtin(name: str, N: int | None = None) -> CoefficientSequence:
    if name not in BUILTIN_N:
        raise KeyError(f"unknown sequence {name!r}; choose from {sorted(BUILTIN_N)}")
    N = BUILTIN_N[name] if N is None else N
    if name == "elliptic14":
        return elliptic14_sequence(N)
    if name == "theta12":
        return theta12_sequence(N)
    if name == "jacobi":
        return jacobi_theta_sequence(N)
    if name == "harmonic":
        return harmonic_theta_sequence(N)
    return eisenstein_sequence(int(name[len("eisenstein"):]), N)


_CACHE: dict[tuple[str, int], CoefficientSequence] = {}


def cached(name: str, N: int | None = None, cache_dir: Path | None = None) -> CoefficientSequence:
    """Built-in sequence, memoized in-process and optionally on disk."""
    N = BUILTIN_N.get(name, 0) if N is None else N
    key = (name, N)
    if key in _CACHE:
        return _CACHE[key]
    seq = None
    if cache_dir is not None:
        path = Path(cache_dir) / f"{name}_{N}.tsv"
        if path.exists():
            seq = read_cache(path)
        else:
            seq = builtin(name, N)
            path.parent.mkdir(parents=True, exist_ok=True)
            write_cache(seq, path)
    if seq is None:
        seq = builtin(name, N)
    _CACHE[key] = seq
    return seq


def _fmt(v: float) -> str:
    v = float(v)
    if v.is_integer() and abs(v) < 2**53:
        return str(int(v))
    return repr(v)


def format_cache(seq: CoefficientSequence) -> str:
    lines = [f"# {seq.name} {seq.weight} {seq.growth_exponent} "
             f"{'true' if seq.is_cusp_form else 'false'} {seq.N}"]
    a0 = complex(seq.a0)
    if a0 != 0:
        lines.append(f"0\t{_fmt(a0.real)}\t{_fmt(a0.imag)}")
    terms = seq.terms
    if np.issubdtype(terms.dtype, np.integer):
        lines.extend(f"{n}\t{v}\t0" for n, v in enumerate(terms.tolist(), start=1))
    else:
        c = terms.astype(complex)
        lines.extend(f"{n}\t{_fmt(v.real)}\t{_fmt(v.imag)}" for n, v in enumerate(c, start=1))
    return "\n".join(lines) + "\n"


def write_cache(seq: CoefficientSequence, path) -> Path:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(format_cache(seq))
    tmp.replace(path)
    return path


_RULES = {
    "elliptic14": CuspRule.ALL_CUSPIDAL,
    "theta12": CuspRule.ALL_CUSPIDAL,
    "harmonic": CuspRule.ALL_CUSPIDAL,
    "jacobi": CuspRule.GAMMA0_4_THETA,
    "eisenstein4": CuspRule.FULL_MODULAR_NONCUSPIDAL,
    "eisenstein6": CuspRule.FULL_MODULAR_NONCUSPIDAL,
    "eisenstein8": CuspRule.FULL_MODULAR_NONCUSPIDAL,
}
_THRESHOLDS = {"elliptic14": Fraction(3, 2)}


def read_cache(path) -> CoefficientSequence:
    text = Path(path).read_text().splitlines()
    header = text[0].lstrip("#").split()
    if len(header) != 5:
        raise ValueError(f"bad cache header in {path}: {text[0]!r}")
    name, weight, gamma, cusp, N = header
    N = int(N)
    re_ = np.zeros(N)
    im_ = np.zeros(N)
    a0 = 0j
    for line in text[1:]:
        n, r, i = line.split("\t")
        n = int(n)
        if n == 0:
            a0 = complex(float(r), float(i))
        else:
            re_[n - 1], im_[n - 1] = float(r), float(i)
    terms = re_ if not im_.any() else re_ + 1j * im_
    if not im_.any() and np.all(re_ == np.round(re_)) and np.max(np.abs(re_), initial=0) < 2**53:
        terms = re_.astype(np.int64)
    is_cusp = cusp == "true"
    rule = _RULES.get(name, CuspRule.ALL_CUSPIDAL if is_cusp else None)
    gamma = Fraction(gamma)
    return CoefficientSequence(
        name, terms, Fraction(weight), gamma, is_cusp, rule,
        _THRESHOLDS.get(name, gamma), a0=a0 if a0.imag else a0.real,
    )
