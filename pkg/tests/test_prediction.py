import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from modholder import modcoeffs as mc
from modholder.regularity.prediction import (
    parse_point,
    predict_exponents,
    predict_spectrum,
    restricted_value,
    restricted_value_printed,
)

F = Fraction


def test_quoted_values(seqs):
    p = predict_exponents(seqs["elliptic14"], F(7, 4), "sqrt2m1")
    assert (p.beta, p.beta_star, p.beta_starstar) == (F(3, 4),) * 3
    p = predict_exponents(seqs["theta12"], F(1), "golden")
    assert p.beta == F(3, 4)  # (2 delta - 1)/4 with delta = 2
    p = predict_exponents(seqs["harmonic"], F(13, 4), "0")
    assert (p.beta, p.beta_star, p.beta_starstar) == (F(3, 2), F(1), F(3, 4))
    assert "would give 2" in p.conditions_report
    p = predict_exponents(seqs["jacobi"], 1, "1/3")
    assert p.beta == F(1, 2) and p.beta_star is None
    p = predict_exponents(seqs["eisenstein4"], 5, "1/3")
    assert p.beta == 1


@pytest.mark.parametrize("k", [4, 6])
def test_eisenstein_alpha_minus_k(seqs, k):
    for alpha in (F(k + 1), F(2 * k - 1, 1), F(k + 5, 1)):
        p = predict_exponents(seqs[f"eisenstein{k}"], alpha, "2/5")
        assert p.beta == alpha - k


def test_condition_failure_flagged(seqs):
    p = predict_exponents(seqs["elliptic14"], F(7, 4), "1/2")
    assert p.beta is None and p.beta_star is None and p.beta_starstar == F(3, 4)
    assert "FAILS" in p.conditions_report and p.applicable


def test_inapplicable_cases(seqs):
    assert not predict_exponents(seqs["elliptic14"], F(1), "sqrt2m1").applicable
    assert not predict_exponents(seqs["jacobi"], 1, "1/2").applicable
    assert not predict_exponents(seqs["jacobi"], 1, "golden").applicable
    # alpha <= r fails the non-cuspidal hypothesis
    p = predict_exponents(seqs["eisenstein4"], F(7, 2), "0")
    assert p.beta is None and not p.applicable


def test_printed_variant_breaks_ordering():
    a, r = F(13, 4), F(5)
    assert restricted_value_printed(a, r) > 2 * a - r
    assert restricted_value(a, r) <= 2 * a - r


@given(st.fractions(F(1, 2), F(12)), st.sampled_from([F(1, 2), F(2), F(5), F(7, 2)]),
       st.sampled_from(["0", "1/2", "3/7", "sqrt2m1", "golden"]))
def test_ordering_invariant(alpha, r, point):
    seq = mc.CoefficientSequence("t", [1], r, r / 2, True, mc.CuspRule.ALL_CUSPIDAL, r / 2)
    p = predict_exponents(seq, alpha, point)
    vals = (p.beta, p.beta_star, p.beta_starstar)
    if None not in vals:
        assert p.beta >= p.beta_star >= p.beta_starstar
    if p.applicable and parse_point(point).is_rational:
        assert p.beta_starstar == alpha - r / 2


def test_spectrum(seqs):
    s = predict_spectrum(seqs["harmonic"], F(13, 4))
    assert s.entries == {F(3, 4): 1, F(3, 2): 0} and s.rational_condition
    assert s.dimension(F(1, 2)) == -math.inf
    s = predict_spectrum(seqs["elliptic14"], F(7, 4))
    assert s.entries == {F(3, 4): 1, F(3, 2): 0} and not s.rational_condition and "FALSE" in s.report
    assert not predict_spectrum(seqs["elliptic14"], F(1)).applicable
    assert not predict_spectrum(seqs["jacobi"], F(1)).applicable


def test_parse_point():
    assert parse_point("1/3").rational == F(1, 3)
    assert parse_point("0").rational == 0
    assert parse_point("sqrt2m1").value == pytest.approx(math.sqrt(2) - 1)
    for bad in ("0.4142", "pi", "1e-3"):
        with pytest.raises(ValueError):
            parse_point(bad)
