import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from modholder.regularity.fitting import (
    DecayModel,
    ExponentEstimate,
    FitError,
    ScaleScan,
    ScanKind,
    fit_slope,
    select_decay_model,
)


def scan(j, m, kind="cone"):
    j = np.asarray(j, dtype=float)
    return ScaleScan(j, -j, np.asarray(m, dtype=float), kind)


def test_exact_line():
    j = np.arange(4, 14)
    e = fit_slope(scan(j, -0.75 * j + 3))
    assert e.slope == pytest.approx(0.75) and e.stderr == 0 and e.r_squared == 1
    assert e.n_points == 8 and e.fit_range == (6, 13)


def test_window_and_refusal():
    j = np.arange(4, 14)
    e = fit_slope(scan(j, -2.0 * j), j_window=(4, 7))
    assert e.n_points == 4 and e.slope == pytest.approx(2)
    with pytest.raises(FitError):
        fit_slope(scan(j, -j), j_window=(4, 6))
    with pytest.raises(FitError):
        fit_slope(scan([1, 2, 3], [0, 0, 0]))
    with pytest.raises(FitError):
        ExponentEstimate(1.0, 0.0, 1.0, (0, 1), 3)


def test_sentinels_excluded():
    j = np.arange(1, 11)
    m = -0.5 * j
    m[[2, 5]] = -math.inf
    e = fit_slope(scan(j, m), finest=None)
    assert e.n_points == 8 and e.slope == pytest.approx(0.5)


@given(st.integers(0, 10**6))
def test_noisy_slope(seed):
    rng = np.random.default_rng(seed)
    j = np.arange(6, 17)
    m = -0.75 * j + rng.uniform(-0.01, 0.01, j.size)
    e = fit_slope(scan(j, m))
    assert abs(e.slope - 0.75) < 0.01


def test_scan_invariants():
    with pytest.raises(ValueError):
        ScaleScan([1, 2], [-1, -1], [0, 0], "cone")
    with pytest.raises(ValueError):
        ScaleScan([1, 2], [-1, -2], [0, np.nan], "cone")
    with pytest.raises(ValueError):
        ScaleScan([1, 2], [-1, -2], [0], "cone")


def test_csv_roundtrip_and_bytes():
    j = np.arange(3, 8)
    s = scan(j, [-1.5, -math.inf, -2.25, -3.0, -3.5], ScanKind.OSCILLATION)
    text = s.to_csv()
    assert text.splitlines()[0] == "j,log2_scale,log2_modulus"
    assert "-inf" in text.splitlines()[2]
    back = ScaleScan.from_csv(text, "oscillation")
    assert back.to_csv() == text


def test_decay_model_selection():
    ly = -np.arange(2, 10, 0.25)
    y = 2.0**ly
    expo = select_decay_model(ly, -0.3 / y / math.log(2))
    assert expo.model is DecayModel.EXPONENTIAL and expo.exponent_or_rate == pytest.approx(0.3)
    power = select_decay_model(ly, -1.0 * ly + 2)
    assert power.model is DecayModel.POWER_LAW and power.exponent_or_rate == pytest.approx(-1)
    # a constant is fitted exactly by both: a tie, reported as an ambiguous power law
    flat = select_decay_model(ly, np.zeros_like(ly))
    assert flat.model is DecayModel.POWER_LAW and flat.ambiguous


@given(st.floats(0.01, 2), st.floats(-3, 3))
def test_exponential_only_when_dominating(rate, c):
    ly = -np.arange(2, 8, 0.25)
    fit = select_decay_model(ly, c - rate / 2.0**ly)
    if fit.model is DecayModel.EXPONENTIAL:
        assert fit.exponential_fit[1] - fit.power_fit[1] >= 0.05
