import math
import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from modholder import modcoeffs as mc
from modholder import series_eval as se

F = Fraction
ALPHAS = {"elliptic14": F(7, 4), "theta12": F(1), "jacobi": F(1), "harmonic": F(13, 4),
          "eisenstein4": F(5), "eisenstein6": F(7), "eisenstein8": F(9)}


def spec(seqs, name, flavor="complex"):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        return se.SeriesSpec(seqs[name], ALPHAS[name], flavor)


def single_mode(alpha=1):
    return mc.CoefficientSequence("mode", np.array([1.0, 0, 0, 0]), F(2), F(1), False, None, F(1))


def test_spec_validation(seqs):
    with pytest.raises(ValueError):
        se.SeriesSpec(seqs["elliptic14"], F(1))
    cplx = mc.CoefficientSequence("c", np.array([1j, 2]), F(2), F(1), False, None, F(1))
    with pytest.raises(ValueError):
        se.SeriesSpec(cplx, F(2), "sine")
    with pytest.warns(RuntimeWarning):
        se.SeriesSpec(seqs["elliptic14"], F(5, 4))


def test_sine_at_zero_and_cosine_even(seqs):
    s, c = spec(seqs, "elliptic14", "sine"), spec(seqs, "elliptic14", "cosine")
    assert se.eval_point(s, 0.0, 2000) == 0.0
    for x in (0.1, 0.37, F(2, 7)):
        assert se.eval_point(c, x, 2000) == pytest.approx(se.eval_point(c, -x, 2000), abs=1e-13)


@given(st.floats(0, 1), st.sampled_from(["elliptic14", "theta12", "harmonic"]))
def test_flavor_identity(seqs, x, name):
    z = se.eval_point(spec(seqs, name), x, 2000)
    c = se.eval_point(spec(seqs, name, "cosine"), x, 2000)
    s = se.eval_point(spec(seqs, name, "sine"), x, 2000)
    assert abs(z - (c + 1j * s)) < 1e-12


def test_periodicity(seqs):
    rng = np.random.default_rng(0)
    sp = spec(seqs, "elliptic14")
    for x in rng.uniform(-3, 3, 100):
        assert abs(se.eval_point(sp, x, 500) - se.eval_point(sp, x + 1, 500)) < 1e-12


def test_exact_rational_phases():
    n = np.arange(1, 10**6, 997)
    ph = se.phases(n, F(1, 3))
    assert set(np.round(ph * 3).astype(int).tolist()) <= {0, 1, 2}
    assert np.all(ph * 3 == np.round(ph * 3))


@pytest.mark.parametrize("name", list(ALPHAS))
def test_fft_matches_direct(seqs, name):
    sp = spec(seqs, name)
    N = min(2000, seqs[name].N)
    a = se.eval_grid_fft(sp, 4096, N)
    b = se.eval_grid_direct(sp, 0.0, 1 / 4096, 4096, N)
    assert np.max(np.abs(a.values - b.values)) < 1e-9


def test_fft_flavors_and_offset(seqs):
    for fl in ("sine", "cosine"):
        sp = spec(seqs, "theta12", fl)
        a = se.eval_grid_fft(sp, 4096, 2000, x_start=F(1, 5))
        b = se.eval_grid_direct(sp, 0.2, 1 / 4096, 4096, 2000)
        assert np.max(np.abs(a.values - b.values)) < 1e-9


def test_fft_refuses_aliasing(seqs):
    with pytest.raises(se.AliasingError):
        se.eval_grid_fft(spec(seqs, "elliptic14"), 1000, 600)


def test_fft_trivial_cases():
    zero = mc.CoefficientSequence("z", np.zeros(8), F(2), F(1), False, None, F(1))
    g = se.eval_grid_fft(se.SeriesSpec(zero, F(2)), 64, 8)
    assert np.all(g.values == 0)
    g = se.eval_grid_fft(se.SeriesSpec(single_mode(), F(2)), 64, 4)
    assert np.allclose(g.values, np.exp(2j * np.pi * np.arange(64) / 64), atol=1e-14)


def test_fft_deterministic(seqs):
    sp = spec(seqs, "elliptic14", "sine")
    a = se.eval_grid_fft(sp, 8192, 4000).values
    b = se.eval_grid_fft(sp, 8192, 4000).values
    assert a.tobytes() == b.tobytes()


def test_direct_grid_single_and_shift(seqs):
    sp = spec(seqs, "elliptic14")
    g = se.eval_grid_direct(sp, 0.3, 0.01, 1, 1000)
    assert abs(g.values[0] - se.eval_point(sp, 0.3, 1000)) < 1e-12
    g2 = se.eval_grid_direct(sp, 1.3, 0.01, 7, 1000)
    g1 = se.eval_grid_direct(sp, 0.3, 0.01, 7, 1000)
    assert np.max(np.abs(g1.values - g2.values)) < 1e-12
    j = se.eval_grid_direct(sp, 0.3, 0.01, 3, 1000, jitter=True)
    assert j.x_start == pytest.approx(0.3 + se.GOLDEN_JITTER * 0.01)


def test_sample_grid_invariants():
    with pytest.raises(ValueError):
        se.SampleGrid(0, 0.1, 3, np.zeros(2), 1)
    with pytest.raises(ValueError):
        se.SampleGrid(0, 0.1, 2, np.array([0, np.nan]), 1)


def test_truncation_length(seqs):
    sp = spec(seqs, "elliptic14")
    N, tb = se.truncation_length(sp, 1e-2)
    assert tb <= 1e-2 and N <= seqs["elliptic14"].N
    # bound is a power law with exponent gamma - alpha = -3/4
    model = se.calibrate_tail(sp)
    assert model.exponent == pytest.approx(-0.75)
    N1, _ = se.truncation_length(sp, 1e-1)
    assert N == pytest.approx(N1 * 10 ** (1 / 0.75), rel=1e-2)
    assert se.truncation_length(sp, 1e6) == (1, model.constant)
    with pytest.raises(mc.ResourceError):
        se.truncation_length(sp, 1e-12)
    with pytest.raises(ValueError):
        se.truncation_length(sp, 0)


def test_truncation_halving_eps_doubles_N():
    # alpha - gamma = 1 for eisenstein4 at alpha = 5
    seq = mc.cached("eisenstein4", 4096)
    sp = se.SeriesSpec(seq, F(5))
    model = se.calibrate_tail(sp)
    N1, _ = se.truncation_length(sp, model.constant / 100)
    N2, _ = se.truncation_length(sp, model.constant / 200)
    assert N2 == 2 * N1


def test_doubling_N_within_tail_bound(seqs):
    sp = spec(seqs, "elliptic14")
    N, tb = se.truncation_length(sp, 5e-2)
    for x in (F(1, 3), 0.123, 0.77):
        assert abs(se.eval_point(sp, x, N) - se.eval_point(sp, x, 2 * N)) <= tb
    a = se.eval_grid_fft(sp, 8 * N, N).values
    b = se.eval_grid_fft(sp, 8 * N, 2 * N).values
    assert np.max(np.abs(a - b)) <= tb


def test_halfplane_basics(seqs):
    j = seqs["jacobi"]
    expected = 1 + 2 * math.exp(-2 * math.pi) + 2 * math.exp(-8 * math.pi) + 2 * math.exp(-18 * math.pi)
    assert se.eval_halfplane(j, 0, 1.0) == pytest.approx(expected, rel=1e-15)
    assert se.eval_halfplane(j, 0.3, 50.0) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        se.eval_halfplane(j, 0, 0.0)
    with pytest.raises(ValueError):
        se.eval_halfplane(j, 0, -1.0)


@given(st.floats(0, 1), st.floats(0.01, 1))
def test_halfplane_triangle_inequality(seqs, x, y):
    s = seqs["elliptic14"]
    assert abs(se.eval_halfplane(s, x, y)) <= se.halfplane_abs_sum(s, y) * (1 + 1e-12)


def test_halfplane_row_matches_points(seqs):
    s = seqs["harmonic"]
    row, _ = se.halfplane_row(s, 0.003, 256, F(1, 3))
    for k in (0, 5, 100, 255):
        assert abs(row[k] - se.eval_halfplane(s, F(1, 3) + F(k, 256), 0.003)) < 1e-9 * abs(row).max()


def test_poisson_kernel():
    for r in (0.0, 0.3, 0.9):
        assert se.poisson_kernel(r, 0.0) == pytest.approx((1 + r) / (1 - r))
    assert np.allclose(se.poisson_kernel(0.0, np.linspace(-1, 1, 9)), 1.0)
    val, _ = integrate.quad(lambda t: se.poisson_kernel(0.9, t), -0.5, 0.5, epsabs=1e-13, limit=200)
    assert abs(val - 1) < 1e-8
    for bad in (1.0, 1.5, -0.1):
        with pytest.raises(ValueError):
            se.poisson_kernel(bad, 0.0)


@pytest.mark.parametrize("y", [0.05, 0.1])
def test_poisson_identity_theta12(seqs, y):
    """f(x + iy) is the Poisson integral of the boundary series (alpha = 0 weights)."""
    s = seqs["theta12"]
    N = 2000
    M = 8192
    idx, vals = s.support(N)
    c = np.zeros(M, dtype=complex)
    c[idx] = vals
    boundary = np.fft.ifft(c) * M  # truncated sum a_n e(nt) on t = k/M
    r = math.exp(-2 * math.pi * y)
    for x in (0.1, 0.3141, 0.77):
        t = np.arange(M) / M
        integral = np.mean(se.poisson_kernel(r, x - t) * boundary)
        ref = se.eval_halfplane(s, x, y, N)
        assert abs(integral - ref) / abs(ref) < 1e-6


def test_grid_csv_format(seqs):
    g = se.eval_grid_fft(spec(seqs, "theta12", "sine"), 8, 3)
    lines = se.grid_csv(g).splitlines()
    assert lines[0] == "x,re,im" and len(lines) == 9
    x, re_, im = lines[3].split(",")
    assert float(x) == 2 / 8 and float(im) == 0.0
    assert float(re_) == g.values[2]


def test_as_point():
    assert se.as_point("1/3") == F(1, 3)
    assert se.as_point(2) == F(2)
    assert isinstance(se.as_point(0.5), float)
