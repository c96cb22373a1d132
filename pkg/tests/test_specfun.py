"""Special functions against independent references."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frachardy import specfun
from frachardy.errors import DomainValidationError


def test_gamma_ln_matches_factorials():
    for n in range(1, 10):
        assert specfun.gamma_ln(n + 1).value == pytest.approx(
            math.log(math.factorial(n)), rel=1e-14)


def test_beta_symmetric_and_exact():
    # B(2.5, 3.5) = Gamma(2.5) Gamma(3.5) / Gamma(6)
    expected = math.gamma(2.5) * math.gamma(3.5) / math.gamma(6.0)
    assert specfun.beta(2.5, 3.5).value == pytest.approx(expected, rel=1e-14)
    assert specfun.beta(3.5, 2.5).value == pytest.approx(expected, rel=1e-14)


def test_beta_ln_consistent_with_beta():
    assert specfun.beta_ln(4.0, 9.0) == pytest.approx(
        math.log(specfun.beta(4.0, 9.0).value), rel=1e-13)


def test_sphere_area_and_ball_volume_closed_forms():
    assert specfun.sphere_area(1).value == pytest.approx(2 * math.pi, rel=1e-15)
    assert specfun.sphere_area(2).value == pytest.approx(4 * math.pi, rel=1e-15)
    assert specfun.ball_volume(2).value == pytest.approx(math.pi, rel=1e-15)
    assert specfun.ball_volume(3).value == pytest.approx(
        4 * math.pi / 3, rel=1e-15)


def test_hyp2f1_reduces_to_elementary_log():
    # 2F1(1, 1; 2; z) = -ln(1-z)/z on the series branch
    for z in (0.05, 0.2, 0.4):
        got = specfun.hyp2f1(1.0, 1.0, 2.0, z).value
        assert got == pytest.approx(-math.log1p(-z) / z, rel=1e-12)


def test_hyp2f1_flags_degenerate_transformation():
    from frachardy.errors import NearDegenerate
    with pytest.raises(NearDegenerate):
        specfun.hyp2f1(1.0, 1.0, 2.0, 0.85)


def test_hyp2f1_binomial_identity():
    # 2F1(a, b; b; z) = (1-z)^(-a)
    for z in (0.1, 0.45, 0.8):
        got = specfun.hyp2f1(1.7, 2.3, 2.3, z).value
        assert got == pytest.approx((1 - z) ** -1.7, rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.3, 3.0), st.floats(0.3, 3.0), st.floats(0.0, 0.92))
def test_hyp2f1_matches_scipy(a, b, z):
    import scipy.special as sc
    c = a + b + 1.6  # keeps c - a - b away from the degenerate integers
    got = specfun.hyp2f1(a, b, c, z).value
    assert got == pytest.approx(float(sc.hyp2f1(a, b, c, z)), rel=1e-9)


def test_hyp2f1_rejects_nonpositive_denominator_parameter():
    with pytest.raises(DomainValidationError):
        specfun.hyp2f1(1.0, 1.0, -2.0, 0.5)


def test_alpha_coefficient_positive():
    for n in (2, 3, 4):
        assert specfun.alpha_coefficient(n).value > 0.0
