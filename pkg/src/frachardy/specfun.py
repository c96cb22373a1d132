"""Real special functions: log-gamma, beta, Gauss 2F1, sphere/ball measures.

Every operation returns a :class:`SpecialValue` carrying a heuristic absolute
error bound, so downstream quadrature can compose error budgets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import special as _sp

from .errors import DomainValidationError, NearDegenerate

# Relative accuracy delivered by scipy's gammaln on moderate arguments.
_GAMMALN_RTOL = 1e-14
# Guard distance from an integer for the (1-t) linear transformation.
DEGENERACY_GUARD = 1e-6
_SERIES_MAX_TERMS = 4000


@dataclass(frozen=True)
class SpecialValue:
    """A finite real value with a declared absolute error bound."""

    value: float
    abs_error: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise DomainValidationError(f"non-finite special value {self.value}")


def gamma_ln(x: float) -> SpecialValue:
    """ln Gamma(x) for x > 0."""
    if x <= 0.0:
        raise DomainValidationError(f"gamma_ln requires x > 0, got {x}")
    val = float(_sp.gammaln(x))
    return SpecialValue(val, abs(val) * _GAMMALN_RTOL + 1e-300)


def beta(a: float, b: float) -> SpecialValue:
    """Euler beta function B(a, b) for a, b > 0."""
    if a <= 0.0 or b <= 0.0:
        raise DomainValidationError(f"beta requires positive arguments, got ({a}, {b})")
    la, lb, lab = gamma_ln(a), gamma_ln(b), gamma_ln(a + b)
    val = math.exp(la.value + lb.value - lab.value)
    err = val * (la.abs_error + lb.abs_error + lab.abs_error + 1e-15)
    return SpecialValue(val, err)


def beta_ln(a: float, b: float) -> float:
    """ln B(a, b) for a, b > 0."""
    return gamma_ln(a).value + gamma_ln(b).value - gamma_ln(a + b).value


def _hyp2f1_series(a: float, b: float, c: float, t: float) -> SpecialValue:
    """Defining Gauss series with term-ratio stopping; needs |t| <= ~0.6."""
    term = 1.0
    acc = 1.0
    for n in range(_SERIES_MAX_TERMS):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * t
        acc += term
        if abs(term) <= 1e-16 * abs(acc):
            break
    else:
        raise DomainValidationError(
            f"2F1 series did not converge for (a={a}, b={b}, c={c}, t={t})"
        )
    return SpecialValue(acc, abs(acc) * 1e-14 + abs(term))


def _gamma_ratio_ln(num: tuple[float, ...], den: tuple[float, ...]):
    """(log magnitude, sign) of prod Gamma(num) / prod Gamma(den)."""
    logmag = 0.0
    sign = 1.0
    for x in num:
        logmag += float(_sp.gammaln(x))
        sign *= float(_sp.gammasgn(x))
    for x in den:
        logmag -= float(_sp.gammaln(x))
        sign /= float(_sp.gammasgn(x))
    return logmag, sign


def hyp2f1_log_terms(a: float, b: float, c: float, one_minus_t: float):
    """The two (1-t)-transformation terms of 2F1 in log-magnitude form.

    Returns ((log|T1|, sgn T1), (log|T2|, sgn T2)) with
    2F1(a,b;c;t) = T1 + T2.  Only valid for c - a - b away from integers.
    Exposing the terms in log form lets callers keep products finite when
    the second term blows up like (1-t)^(c-a-b) near t = 1.
    """
    u = one_minus_t
    cab = c - a - b
    if abs(cab - round(cab)) < DEGENERACY_GUARD:
        raise NearDegenerate(
            f"c-a-b = {cab} within {DEGENERACY_GUARD} of an integer; "
            "use the direct-integral path"
        )
    f1 = _hyp2f1_series(a, b, a + b - c + 1.0, u)
    f2 = _hyp2f1_series(c - a, c - b, cab + 1.0, u)
    l1, s1 = _gamma_ratio_ln((c, cab), (c - a, c - b))
    l2, s2 = _gamma_ratio_ln((c, -cab), (a, b))
    log_t1 = l1 + math.log(abs(f1.value)) if f1.value != 0.0 else -math.inf
    log_t2 = (
        l2 + cab * math.log(u) + math.log(abs(f2.value))
        if f2.value != 0.0
        else -math.inf
    )
    return (log_t1, s1 * math.copysign(1.0, f1.value)), (
        log_t2,
        s2 * math.copysign(1.0, f2.value),
    )


def hyp2f1(
    a: float, b: float, c: float, t: float, one_minus_t: float | None = None
) -> SpecialValue:
    """Gauss hypergeometric 2F1(a, b; c; t) on 0 <= t < 1.

    Uses the defining series for t <= 0.5 and the (1-t) linear transformation
    for t > 0.5.  When c - a - b is within the guard distance of an integer
    the transformation is ill-conditioned and :class:`NearDegenerate` is
    raised; the kernel module then falls back to the direct integral of the
    angular kernel instead.

    ``one_minus_t`` may be supplied when 1 - t is known to higher precision
    than ``1.0 - t`` (quadrature nodes clustered at the right endpoint).
    """
    if c <= 0.0 and abs(c - round(c)) < 1e-12:
        raise DomainValidationError(f"c = {c} is a nonpositive integer")
    if one_minus_t is None:
        one_minus_t = 1.0 - t
    if t < 0.0 or one_minus_t <= 0.0:
        raise DomainValidationError(f"hyp2f1 requires 0 <= t < 1, got t = {t}")
    if t == 0.0:
        return SpecialValue(1.0, 0.0)
    if t <= 0.5:
        return _hyp2f1_series(a, b, c, t)
    (l1, s1), (l2, s2) = hyp2f1_log_terms(a, b, c, one_minus_t)
    m = max(l1, l2)
    val = math.exp(m) * (s1 * math.exp(l1 - m) + s2 * math.exp(l2 - m))
    # Cancellation-aware bound: both terms carry ~1e-14 relative error.
    err = (math.exp(l1 - m) + math.exp(l2 - m)) * math.exp(m) * 1e-13
    return SpecialValue(val, err)


def sphere_area(k: int) -> SpecialValue:
    """Surface measure of the unit k-sphere in R^(k+1)."""
    if k < 0 or int(k) != k:
        raise DomainValidationError(f"sphere_area requires integer k >= 0, got {k}")
    lg = gamma_ln((k + 1) / 2.0)
    val = 2.0 * math.pi ** ((k + 1) / 2.0) / math.exp(lg.value)
    return SpecialValue(val, val * 1e-14)


def ball_volume(n: int) -> SpecialValue:
    """Lebesgue measure of the unit ball in R^n."""
    if n < 1 or int(n) != n:
        raise DomainValidationError(f"ball_volume requires integer n >= 1, got {n}")
    lg = gamma_ln(n / 2.0 + 1.0)
    val = math.pi ** (n / 2.0) / math.exp(lg.value)
    return SpecialValue(val, val * 1e-14)


def alpha_coefficient(n: int) -> SpecialValue:
    """pi^((n-3)/2) / Gamma((n-1)/2); satisfies 2*pi*alpha = |S^(n-2)|."""
    if n < 2:
        raise DomainValidationError(f"alpha coefficient requires n >= 2, got {n}")
    lg = gamma_ln((n - 1) / 2.0)
    val = math.pi ** ((n - 3) / 2.0) / math.exp(lg.value)
    return SpecialValue(val, val * 1e-14)
