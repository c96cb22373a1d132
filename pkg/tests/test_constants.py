"""Hardy constant, supersolution constant, and normalization constants
against independently derived high-precision references."""

import math

import pytest

from frachardy.constants import (BetaExponent, c_beta, hardy_constant, k_pn,
                                 lower_bound_open_set)
from frachardy.errors import (BetaOutOfRange, CriticalExponent,
                              DomainValidationError)
from frachardy.kernel import FracParams
from frachardy.quadrature import QuadSpec

# 40+ digit adaptive tanh-sinh quadrature of the radial representation with
# an explicit 1 - r substitution on the singular half, converged in the
# working precision (frozen references)
ORACLE = {
    (1, 0.9, 2.0): 2.1000003606017999,
    (1, 0.5, 3.0): 0.05508375625201383,
    (1, 0.25, 2.0): 1.4037085997664524,
    (2, 0.6, 4.0): 0.0008057807639333379,
    (3, 0.8, 4.0): 3.582290656562953e-05,
}


@pytest.mark.parametrize("triple,expected", sorted(ORACLE.items()))
def test_hardy_constant_against_oracle(triple, expected):
    n, s, p = triple
    h = hardy_constant(FracParams(n, s, p))
    assert h.value.value == pytest.approx(expected, rel=1e-9)
    assert abs(h.value.value - expected) <= max(h.value.error, 1e-12)


def test_hardy_constant_cross_check_consistent():
    h = hardy_constant(FracParams(2, 0.7, 4.0))
    assert h.cross_check.value == pytest.approx(h.value.value, rel=1e-9)


def test_hardy_constant_critical_line_rejected():
    with pytest.raises(CriticalExponent):
        hardy_constant(FracParams(1, 0.5, 2.0))


def test_subcritical_constant_positive():
    h = hardy_constant(FracParams(1, 0.25, 2.0))
    assert h.value.value > 0.0
    assert h.value.error < 1e-8 * h.value.value


@pytest.mark.parametrize("triple", [
    (1, 0.9, 2.0), (1, 0.7, 3.0), (2, 0.8, 3.0),
    (2, 0.8, 5.0), (3, 0.9, 4.0), (2, 0.75, 4.0),
])
def test_cbeta_identity_at_special_exponent(triple):
    # C((sp - N)/p) equals the sharp constant
    n, s, p = triple
    params = FracParams(n, s, p)
    be = BetaExponent((params.sp - n) / p, params)
    h = hardy_constant(params)
    cb = c_beta(be)
    assert cb.value == pytest.approx(h.value.value, rel=1e-10)


def test_cbeta_positive_on_admissible_range():
    params = FracParams(1, 0.9, 3.0)
    upper = (params.sp - 1) / (params.p - 1)
    for frac in (0.1, 0.5, 0.9):
        be = BetaExponent(frac * upper, params)
        assert c_beta(be).value > 0.0


def test_beta_exponent_range_validation():
    params = FracParams(1, 0.9, 3.0)
    upper = (params.sp - 1) / (params.p - 1)
    with pytest.raises(BetaOutOfRange):
        BetaExponent(-0.1, params)
    with pytest.raises(BetaOutOfRange):
        BetaExponent(upper, params)
    with pytest.raises(CriticalExponent):
        BetaExponent(0.1, FracParams(1, 0.4, 2.0))


def test_k_pn_closed_forms():
    # one dimension: two boundary points of measure one each
    assert k_pn(1, 3.0).value == pytest.approx(2.0 / 3.0, rel=1e-14)
    # N = 2, p = 2: half the area of the unit disc
    assert k_pn(2, 2.0).value == pytest.approx(math.pi / 2.0, rel=1e-12)
    # N = 3, p = 2: |S^1| B(3/2, 1) / 2 = 2 pi / 3
    assert k_pn(3, 2.0).value == pytest.approx(2.0 * math.pi / 3.0, rel=1e-12)


def test_k_pn_validation():
    with pytest.raises(DomainValidationError):
        k_pn(0, 2.0)
    with pytest.raises(DomainValidationError):
        k_pn(2, 1.0)


def test_lower_bound_open_set_matches_constant():
    params = FracParams(1, 0.9, 2.0)
    lb = lower_bound_open_set(params)
    assert lb.value == pytest.approx(ORACLE[(1, 0.9, 2.0)], rel=1e-9)


def test_lower_bound_open_set_needs_supercritical():
    with pytest.raises(CriticalExponent):
        lower_bound_open_set(FracParams(2, 0.5, 3.0))


def test_loose_spec_still_brackets_truth():
    h = hardy_constant(FracParams(1, 0.9, 2.0), QuadSpec(rel_tol=1e-6))
    expected = ORACLE[(1, 0.9, 2.0)]
    assert abs(h.value.value - expected) <= max(h.value.error, 1e-6 * expected)
