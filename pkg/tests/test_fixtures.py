import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from modholder.fixtures import Fixture, FixtureKind, fixture_exponents, fixture_from_name


def test_exponent_triples():
    assert fixture_exponents(Fixture("chirp4")) == (4, 2, Fraction(4, 3))
    assert fixture_exponents(Fixture("power_cusp", Fraction(1, 2))) == (Fraction(1, 2),) * 3
    b, bs, bss = fixture_exponents(Fixture("extreme_chirp"))
    assert b == math.inf and bss == 0 and bs == 1


def test_values():
    c = Fixture("chirp4")
    assert c(0.0) == 0.0
    assert c(0.5) == pytest.approx(0.5**4 * math.sin(4))
    p = Fixture("power_cusp", Fraction(1, 2), 0.25)
    assert p(0.25) == 0.0 and p(1.25) == pytest.approx(1.0)
    e = Fixture("extreme_chirp")
    assert e(0.0) == 0.0
    assert e(1.0) == pytest.approx(math.exp(-1) * math.sin(math.e))


@given(st.floats(0.05, 2.0), st.sampled_from([0, 1, 2]))
def test_chirp_derivatives_by_difference(x, k):
    c = Fixture("chirp4")
    h = 1e-6 * x**3
    num = (c.derivative(k, x + h) - c.derivative(k, x - h)) / (2 * h)
    if k < 2:
        assert num == pytest.approx(c.derivative(k + 1, x), rel=1e-4, abs=1e-6)


@given(st.floats(-1, 1).filter(lambda v: abs(v) > 1e-3))
def test_power_cusp_derivative(u):
    p = Fixture("power_cusp", Fraction(3, 2))
    h = 1e-7
    num = (p(u + h) - p(u - h)) / (2 * h)
    assert num == pytest.approx(p.derivative(1, u), rel=1e-5, abs=1e-7)


def test_undefined_derivatives_at_zero():
    assert np.isnan(Fixture("chirp4").derivative(2, 0.0))
    assert np.isnan(Fixture("power_cusp").derivative(1, 0.0))
    with pytest.raises(ValueError):
        Fixture("chirp4").derivative(3, 0.1)


def test_parse_names():
    assert fixture_from_name("chirp4").kind is FixtureKind.CHIRP4
    p = fixture_from_name("power_cusp:3/4@1/8")
    assert p.s == Fraction(3, 4) and p.x0 == 0.125
    with pytest.raises(ValueError):
        Fixture("power_cusp", Fraction(-1))
