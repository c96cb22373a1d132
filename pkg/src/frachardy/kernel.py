"""The angular kernel of the radial reduction of the Gagliardo seminorm.

Two independent evaluation paths are provided and cross-checked in tests:

* a direct integral over the sphere-average variable t (primary; robust
  near r -> 1),
* a beta * 2F1 closed form (fast away from 1, and the representation the
  sharp-constant formulas are written in).

For dimension 1 the kernel has an elementary closed form, which is always
used.  A log-magnitude variant keeps products finite when s*p is large and
r is close to 1, where the kernel blows up like (1-r)^(-1-s*p).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from scipy import integrate as _si

from . import specfun
from .errors import DimensionUnsupported, DomainValidationError, NearDegenerate
from .quadrature import Estimate, Method, QuadSpec


@dataclass(frozen=True)
class FracParams:
    """The parameter triple (N, s, p) of the fractional seminorm."""

    dim: int
    s: float
    p: float

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise DomainValidationError(f"dim must be an integer >= 1, got {self.dim}")
        if not 0.0 < self.s < 1.0:
            raise DomainValidationError(f"s must lie in (0, 1), got {self.s}")
        if not self.p > 1.0:
            raise DomainValidationError(f"p must exceed 1, got {self.p}")

    @property
    def sp(self) -> float:
        return self.s * self.p

    @property
    def supercritical(self) -> bool:
        return self.sp > self.dim

    @property
    def noncritical(self) -> bool:
        return self.sp != self.dim


def _check_r(r: float):
    if not 0.0 <= r < 1.0:
        raise DomainValidationError(f"kernel argument r must lie in [0, 1), got {r}")


def _hyp_params(dim: int, sp: float):
    return (dim + sp) / 2.0, (sp + 2.0) / 2.0, dim / 2.0


def _phi_direct_scaled(dim: int, sp: float, r: float, one_minus_r: float, spec: QuadSpec):
    """(value, error) of Phi * (1-r)^(dim+sp), via the direct t-integral.

    The scaling keeps the integrand in [0, 1] so the result is finite for
    any exponent; callers reassemble log Phi from it.
    """
    alpha = (dim - 3) / 2.0
    log_one_minus_sq = 2.0 * math.log(one_minus_r)

    def f(t):
        # (1 - 2tr + r^2) = (1-r)^2 + 2r(1-t), evaluated cancellation-free
        q = math.log1p(2.0 * r * (1.0 - t) / (one_minus_r * one_minus_r))
        return math.exp(-0.5 * (dim + sp) * q)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        val, err = _si.quad(
            f, -1.0, 1.0,
            weight="alg", wvar=(alpha, alpha),
            epsabs=spec.abs_tol, epsrel=spec.rel_tol, limit=spec.max_subdivisions,
        )
    area = specfun.sphere_area(dim - 2)
    return area.value * val, area.value * err + abs(val) * area.abs_error


def phi(params: FracParams, r: float, spec: QuadSpec | None = None) -> Estimate:
    """The angular kernel at 0 <= r < 1, direct-integral path.

    Dimension 1 uses the elementary closed form; higher dimensions
    integrate (1-t^2)^((N-3)/2) (1 - 2tr + r^2)^(-(N+sp)/2) over (-1, 1)
    with algebraic endpoint weights (singular at both ends when N = 2).
    """
    _check_r(r)
    sp = params.sp
    if params.dim == 1:
        val = (1.0 - r) ** (-(1.0 + sp)) + (1.0 + r) ** (-(1.0 + sp))
        return Estimate(val, abs(val) * 1e-14, Method.CLOSED_FORM)
    spec = spec or QuadSpec(rel_tol=1e-11)
    scaled, err = _phi_direct_scaled(params.dim, sp, r, 1.0 - r, spec)
    factor = (1.0 - r) ** (-(params.dim + sp))
    return Estimate(scaled * factor, err * factor, Method.ADAPTIVE)


def g_of_t(params: FracParams, t: float, fallback: bool = True,
           one_minus_t: float | None = None) -> Estimate:
    """B((N-1)/2, 1/2) * 2F1((N+ps)/2, (ps+2)/2; N/2; t), for N >= 2.

    On hypergeometric degeneracy (s*p near an integer) the direct
    t-integral path is used instead when ``fallback`` is true.
    """
    if params.dim < 2:
        raise DimensionUnsupported(
            "g_of_t is undefined for dim = 1; use the closed form of phi"
        )
    if one_minus_t is None:
        one_minus_t = 1.0 - t
    if t < 0.0 or one_minus_t <= 0.0:
        raise DomainValidationError(f"g_of_t requires 0 <= t < 1, got {t}")
    a, b, c = _hyp_params(params.dim, params.sp)
    bfac = specfun.beta((params.dim - 1) / 2.0, 0.5)
    try:
        f = specfun.hyp2f1(a, b, c, t, one_minus_t=one_minus_t)
    except NearDegenerate:
        if not fallback:
            raise
        r = math.sqrt(t)
        direct = phi(params, r)
        area = specfun.sphere_area(params.dim - 2)
        return Estimate(direct.value / area.value, direct.error / area.value,
                        direct.method)
    val = bfac.value * f.value
    err = abs(bfac.value) * f.abs_error + abs(f.value) * bfac.abs_error
    return Estimate(val, err, Method.CLOSED_FORM)


def phi_hypergeometric(params: FracParams, r: float) -> Estimate:
    """The kernel via |S^(N-2)| * G(r^2); cross-validation path for N >= 2."""
    _check_r(r)
    if params.dim == 1:
        raise DimensionUnsupported("hypergeometric path requires dim >= 2")
    area = specfun.sphere_area(params.dim - 2)
    g = g_of_t(params, r * r, fallback=False)
    return Estimate(area.value * g.value,
                    area.value * g.error + abs(g.value) * area.abs_error,
                    g.method)


def log_phi(params: FracParams, r: float, one_minus_r: float | None = None,
            kernel_p: float | None = None) -> float:
    """log of the angular kernel, finite for any s*p and r arbitrarily near 1.

    ``kernel_p`` overrides the seminorm power p in the kernel exponent
    (the W^{s,1} perimeter kernel uses p = 1).
    """
    p_eff = params.p if kernel_p is None else kernel_p
    sp = params.s * p_eff
    if one_minus_r is None:
        one_minus_r = 1.0 - r
    if r < 0.0 or one_minus_r <= 0.0:
        raise DomainValidationError(f"kernel argument r must lie in [0, 1), got {r}")
    dim = params.dim
    if dim == 1:
        base = (1.0 + sp) * (-math.log(one_minus_r))
        ratio = (one_minus_r / (1.0 + r)) ** (1.0 + sp)
        return base + math.log1p(ratio)
    a, b, c = _hyp_params(dim, sp)
    t = r * r
    one_minus_t = one_minus_r * (1.0 + r)
    area = specfun.sphere_area(dim - 2)
    bfac = specfun.beta((dim - 1) / 2.0, 0.5)
    prefix = math.log(area.value) + math.log(bfac.value)
    if t <= 0.5:
        return prefix + math.log(specfun.hyp2f1(a, b, c, t).value)

    def log_f_from_terms(aa, bb, cc):
        (l1, s1), (l2, s2) = specfun.hyp2f1_log_terms(aa, bb, cc, one_minus_t)
        m = max(l1, l2)
        inner = s1 * math.exp(l1 - m) + s2 * math.exp(l2 - m)
        if inner <= 0.0:
            raise DomainValidationError("kernel log evaluation lost positivity")
        return m + math.log(inner)

    try:
        return prefix + log_f_from_terms(a, b, c)
    except NearDegenerate:
        # s*p at an integer: the transformation terms have cancelling Gamma
        # poles.  log Phi is analytic in sp with the pole contribution odd
        # in the offset, so a symmetric perturbation removes it to O(d^2).
        d = 8.0 * specfun.DEGENERACY_GUARD
        lo_a, lo_b, _ = _hyp_params(dim, sp - d)
        hi_a, hi_b, _ = _hyp_params(dim, sp + d)
        return prefix + 0.5 * (
            log_f_from_terms(lo_a, lo_b, c) + log_f_from_terms(hi_a, hi_b, c)
        )
