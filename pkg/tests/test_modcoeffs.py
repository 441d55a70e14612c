import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from modholder import modcoeffs as mc
from modholder import numtheory as nt
from oracles import brute_points, lattice_sum, quartic, sigma, theta12_char

# 14a1 q-expansion, first 14 coefficients (point counts + Hecke relations)
E14_HEAD = [1, -1, -2, 1, 0, 2, 1, -1, 1, 0, 0, -2, -4, -1]


def test_elliptic_head(seqs):
    e = seqs["elliptic14"]
    assert list(e.terms[:14]) == E14_HEAD
    assert e.a(6) == e.a(2) * e.a(3)
    assert e.a(9) == e.a(3) ** 2 - 3
    assert (e.weight, e.growth_exponent, e.convergence_threshold) == (2, 1, Fraction(3, 2))
    assert e.is_cusp_form and e.cusp_rule is mc.CuspRule.ALL_CUSPIDAL and e.a0 == 0


def test_elliptic_multiplicativity(seqs):
    a = seqs["elliptic14"].terms
    for m in range(1, 2001):
        for n in range(m, 2001 // m + 1):
            if math.gcd(m, n) == 1:
                assert a[m * n - 1] == a[m - 1] * a[n - 1]


def test_elliptic_prime_powers_against_direct_hecke(seqs):
    e = seqs["elliptic14"]
    for p in (3, 5, 11, 13):
        ap = p + 1 - brute_points(nt.E14.coefficients, p)
        assert e.a(p) == ap
        assert e.a(p * p) == ap * ap - p
    assert e.a(4) == e.a(2) ** 2 and e.a(49) == e.a(7) ** 2


def test_elliptic_cap():
    with pytest.raises(mc.ResourceError):
        mc.elliptic14_sequence(2**17 + 1)


def test_hecke_extend_examples():
    a = mc.hecke_extend({2: -1, 3: 2, 5: 0}, {2}, 2, 6)
    assert a[5] == -2 and a[3] == 1
    a = mc.hecke_extend({2: 1, 3: 1, 5: 3, 7: 0, 11: 0, 13: 0, 17: 0, 19: 0, 23: 0}, set(), 2, 25)
    assert a[24] == 3 * 3 - 5
    with pytest.raises(KeyError):
        mc.hecke_extend({2: 1}, set(), 2, 3)


def test_theta12(seqs):
    t = seqs["theta12"]
    assert t.a(1) == 1 and t.a(25) == -1 and t.a(4) == 0
    nz = np.flatnonzero(t.terms) + 1
    roots = np.sqrt(nz).astype(int)
    assert np.all(roots * roots == nz)
    assert set(t.terms[nz - 1].tolist()) == {-1, 1}
    for k in range(1, 1001):
        r = math.isqrt(k)
        assert t.a(k) == (theta12_char(r) if r * r == k else 0)
    assert {n for n in range(1, 64) if t.a(n * n) != 0 if n * n <= t.N} == {n for n in range(1, 64) if math.gcd(n, 12) == 1}


def test_jacobi(seqs):
    j = seqs["jacobi"]
    assert j.a(0) == 1 and j.a(4) == 2 and j.a(3) == 0
    assert not j.is_cusp_form and j.cusp_rule is mc.CuspRule.GAMMA0_4_THETA
    for k in range(1, 1001):
        assert j.a(k) == sum(1 for n in range(-40, 41) if n * n == k)


def test_harmonic(seqs):
    h = seqs["harmonic"]
    assert (h.a(1), h.a(2), h.a(3)) == (4, -16, 0)
    for k in range(1, 1001):
        assert h.a(k) == lattice_sum(k, quartic)
    assert np.all(h.terms[2::4] == 0)
    assert h.weight == 5 and h.growth_exponent == Fraction(5, 2)


@pytest.mark.parametrize("k", [4, 6, 8])
def test_eisenstein(seqs, k):
    e = seqs[f"eisenstein{k}"]
    for n in range(1, min(1001, e.N + 1)):
        assert e.a(n) == sigma(k - 1, n)
    assert e.weight == k == e.growth_exponent == e.convergence_threshold
    assert not e.is_cusp_form


def test_eisenstein_constant_terms():
    assert mc.eisenstein_sequence(4, 5).a0 == pytest.approx(1 / 240)
    assert mc.eisenstein_sequence(6, 5).a0 == pytest.approx(-1 / 504)


@pytest.mark.parametrize("k", [3, 2, 10, 5])
def test_eisenstein_bad_weight(k):
    with pytest.raises(ValueError):
        mc.eisenstein_sequence(k, 10)


@given(st.integers(1, 1000), st.integers(1, 1000))
def test_eisenstein_multiplicative(m, n):
    if math.gcd(m, n) != 1 or m * n > 4096:
        return
    e = mc.cached("eisenstein4", 4096)
    assert e.a(m * n) == e.a(m) * e.a(n)


def test_cusp_invariants(seqs):
    for s in seqs.values():
        if s.is_cusp_form:
            assert s.a0 == 0 and s.growth_exponent == s.weight / 2
        assert s.N >= 1 and np.all(np.isfinite(s.terms))
    with pytest.raises(ValueError):
        mc.CoefficientSequence("bad", np.ones(3), Fraction(2), Fraction(1), True, None, Fraction(1), a0=1.0)
    with pytest.raises(ValueError):
        mc.CoefficientSequence("bad", np.ones(3), Fraction(2), Fraction(2), True, None, Fraction(1))


def test_classify(seqs):
    j, e, s = seqs["jacobi"], seqs["elliptic14"], seqs["eisenstein4"]
    K = mc.CuspKind
    assert mc.classify_rational_point(j, 0, 1).kind is K.NOT_CUSPIDAL
    assert mc.classify_rational_point(j, 1, 4).kind is K.NOT_CUSPIDAL
    assert mc.classify_rational_point(j, 1, 2).kind is K.CUSPIDAL
    assert mc.classify_rational_point(j, 1, 6).kind is K.CUSPIDAL
    assert mc.classify_rational_point(e, 3, 7).kind is K.CUSPIDAL
    assert mc.classify_rational_point(s, 1, 2).kind is K.NOT_CUSPIDAL
    with pytest.raises(ValueError):
        mc.classify_rational_point(j, 2, 4)


@given(st.integers(-50, 50), st.integers(1, 60))
def test_cusp_behavior_flag(p, q):
    if math.gcd(p, q) != 1:
        return
    b = mc.classify_rational_point(mc.cached("jacobi", 64), p, q)
    assert (b.kind is mc.CuspKind.CUSPIDAL) == b.decay_constant_expected == (q % 4 == 2)


def test_cache_roundtrip(tmp_path, seqs):
    for name in ("elliptic14", "jacobi", "eisenstein4"):
        s = seqs[name].truncated(200)
        path = mc.write_cache(s, tmp_path / f"{name}.tsv")
        text = path.read_text()
        assert text.splitlines()[0] == f"# {name} {s.weight} {s.growth_exponent} {'true' if s.is_cusp_form else 'false'} 200"
        back = mc.read_cache(path)
        assert np.array_equal(back.terms, s.terms) and back.a0 == pytest.approx(s.a0)
        assert back.cusp_rule is s.cusp_rule and back.convergence_threshold == s.convergence_threshold
        assert mc.format_cache(back) == text


def test_disk_cache(tmp_path):
    a = mc.cached("theta12", 50, cache_dir=tmp_path)
    assert (tmp_path / "theta12_50.tsv").exists()
    mc._CACHE.pop(("theta12", 50))
    b = mc.cached("theta12", 50, cache_dir=tmp_path)
    assert np.array_equal(a.terms, b.terms)


def test_unknown_builtin():
    with pytest.raises(KeyError):
        mc.builtin("nope")
