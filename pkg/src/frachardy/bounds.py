"""Eigenvalue lower bounds for the first fractional p-Laplacian eigenvalue:
the Hardy/inradius bound, the Cheeger-type bound, the fractional-Cheeger
diagnostic, the improved classical Cheeger inequality, and the p -> infinity
eigenvalue limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import specfun
from .constants import hardy_constant
from .errors import CriticalExponent, DomainValidationError, UnboundedInradius
from .geometry import DomainModel, cheeger_h1, inradius, s_perimeter_ball
from .kernel import FracParams
from .quadrature import Estimate, Method, QuadSpec


@dataclass(frozen=True)
class BoundReport:
    """Lower bounds for the first eigenvalue on a fixed domain.

    ``inradius_bound`` is the sharp-Hardy-constant bound h / r^(sp);
    ``cheeger_bound`` the bound h (h1/N)^(sp); ``fractional_cheeger_bound``
    a diagnostic obtained by replacing the fractional Cheeger constant with
    an inscribed-ball upper competitor (hence not a certified lower bound,
    flagged by ``heuristic_direction``); ``improved_classical`` the s = 1
    improvement of the classical Cheeger inequality evaluated at the same
    (N, p, h1); ``lambda_s_infinity`` the limit of the p-th roots of the
    eigenvalues.
    """

    domain: DomainModel
    params: FracParams
    inradius_bound: Estimate
    cheeger_bound: Estimate
    fractional_cheeger_bound: Estimate | None
    improved_classical: Estimate | None
    lambda_s_infinity: float
    heuristic_direction: bool = True


def improved_cheeger_s1(n: int, p: float, h1: float) -> Estimate:
    """max{((p - N)/N)^p, 1} (h1/p)^p, the improved classical Cheeger bound.

    Its p-th root tends to h1/N as p grows, instead of vanishing like the
    p-th root of the classical bound (h1/p)^p.
    """
    if int(n) != n or n < 1:
        raise DomainValidationError(f"N must be a positive integer, got {n}")
    if not p > n:
        raise DomainValidationError(f"improved bound needs p > N, got p = {p}")
    if not h1 > 0.0:
        raise DomainValidationError(f"h1 must be positive, got {h1}")
    # log-space evaluation: the two factors overflow separately long before
    # their product leaves the double range
    log_value = max(p * math.log((p - n) / n), 0.0) + p * math.log(h1 / p)
    return Estimate(math.exp(log_value), 0.0, Method.CLOSED_FORM)


def lambda_s_infinity(d: DomainModel, s: float) -> float:
    """The limit of lambda^(1/p) as p -> infinity: 1 / r^s (0 if r = inf)."""
    if not 0.0 < s <= 1.0:
        raise DomainValidationError(f"s must lie in (0, 1], got {s}")
    r = inradius(d)
    if math.isinf(r):
        return 0.0
    return r ** (-s)


def eigenvalue_lower_bounds(params: FracParams, d: DomainModel,
                            spec: QuadSpec | None = None) -> BoundReport:
    """Assemble the lower-bound chain for lambda_{s,p}(Omega), sp > N.

    The inradius and Cheeger bounds require a finite inradius.  The
    fractional-Cheeger entry is populated only when the inscribed ball
    provides a perimeter competitor; since that competitor upper-bounds the
    fractional Cheeger constant, the entry is a heuristic diagnostic rather
    than a certified bound.
    """
    n, s, p = params.dim, params.s, params.p
    sp = params.sp
    if sp <= n:
        raise CriticalExponent(f"bounds need s*p > N, got s*p = {sp}, N = {n}")
    r = inradius(d)
    if math.isinf(r):
        raise UnboundedInradius(
            "the inradius and Cheeger bounds need a bounded inscribed ball"
        )
    h = hardy_constant(params, spec)
    inr = Estimate(h.value.value / r ** sp, h.value.error / r ** sp,
                   h.value.method)
    h1 = cheeger_h1(d)
    ratio = (h1.value / n) ** sp
    cheeger = Estimate(h.value.value * ratio,
                       h.value.error * ratio
                       + h.value.value * sp * ratio / h1.value * h1.error,
                       h.value.method)

    frac = None
    if s < 1.0:
        per = s_perimeter_ball(n, s, r, spec)
        hs_upper = per.value / (specfun.ball_volume(n).value * r ** n)
        coeff = (1.0 - s) * s / (2.0 * n * specfun.ball_volume(n).value)
        base = coeff * hs_upper
        val = h.value.value / n ** sp * base ** p
        rel = h.value.error / h.value.value + p * per.error / per.value
        frac = Estimate(val, abs(val) * rel, per.method)

    improved = improved_cheeger_s1(n, p, h1.value) if p > n else None
    return BoundReport(
        domain=d,
        params=params,
        inradius_bound=inr,
        cheeger_bound=cheeger,
        fractional_cheeger_bound=frac,
        improved_classical=improved,
        lambda_s_infinity=lambda_s_infinity(d, s),
        heuristic_direction=frac is not None,
    )
