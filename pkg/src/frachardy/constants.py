"""Sharp constants of the punctured space: the Hardy constant, the
supersolution constant C(beta), and the sphere-moment constant K_{p,N}.

All weighted integrals against the angular kernel are evaluated in log
space with an exponential change of variable at the right endpoint, so the
(1-r)^(-1-s p) kernel blowup against vanishing power factors is resolved
for any exponent size.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from . import specfun
from .errors import BetaOutOfRange, CriticalExponent, DomainValidationError
from .kernel import FracParams, log_phi
from .quadrature import EndpointMode, Estimate, Method, QuadSpec, integrate

_CRITICAL_SLACK = 1e-12
_BETA_SLACK = 1e-12


class HardyRepresentation(str, enum.Enum):
    FRANK_SEIRINGER = "frank_seiringer"
    REDUCED_POWER = "reduced_power"
    CBETA_IDENTITY = "cbeta_identity"


@dataclass(frozen=True)
class HardyConstant:
    params: FracParams
    value: Estimate
    representation: HardyRepresentation
    cross_check: Estimate


@dataclass(frozen=True)
class BetaExponent:
    """A supersolution power exponent inside (0, (sp-N)/(p-1))."""

    beta: float
    params: FracParams

    def __post_init__(self):
        sp, n, p = self.params.sp, self.params.dim, self.params.p
        if sp <= n + _CRITICAL_SLACK:
            raise CriticalExponent(
                f"supersolution exponents need s*p > N, got s*p = {sp}, N = {n}"
            )
        upper = (sp - n) / (p - 1.0)
        if not _BETA_SLACK < self.beta < upper - _BETA_SLACK:
            raise BetaOutOfRange(
                f"beta = {self.beta} outside the open interval (0, {upper})"
            )

    @property
    def upper(self) -> float:
        return (self.params.sp - self.params.dim) / (self.params.p - 1.0)


def _integral_01_log(log_f, spec: QuadSpec) -> Estimate:
    """Integrate exp(log_f) over (0, 1) with a log-resolved right endpoint.

    ``log_f(rho, one_minus_rho, ln_rho)`` must return the log of the
    (nonnegative) integrand, or -inf where it vanishes.
    """

    def f_plain(rho):
        if rho <= 0.0:
            return 0.0
        v = log_f(rho, 1.0 - rho, math.log(rho))
        return 0.0 if v == -math.inf else math.exp(v)

    left = integrate(
        f_plain, 0.0, 0.5,
        QuadSpec(spec.rel_tol, spec.abs_tol, spec.max_subdivisions,
                 EndpointMode.LEFT_SINGULAR),
    )

    def g(w):
        one_minus = math.exp(-w)
        rho = 1.0 - one_minus
        v = log_f(rho, one_minus, math.log1p(-one_minus))
        return 0.0 if v == -math.inf else math.exp(v - w)

    right = integrate(g, math.log(2.0), math.inf, spec)
    return Estimate(left.value + right.value, left.error + right.error,
                    Method.TANH_SINH)


def _frank_seiringer_log(params: FracParams):
    sp, p, n = params.sp, params.p, params.dim
    c = (n - sp) / p

    def log_f(rho, one_minus, ln_rho):
        diff = math.expm1(c * ln_rho)  # r^c - 1, sign depends on regime
        if diff == 0.0:
            return -math.inf
        return ((sp - 1.0) * ln_rho + p * math.log(abs(diff))
                + log_phi(params, rho, one_minus))

    return log_f


def _reduced_power_log(params: FracParams):
    sp, p, n = params.sp, params.p, params.dim
    c = (sp - n) / p

    def log_f(rho, one_minus, ln_rho):
        diff = -math.expm1(c * ln_rho)  # 1 - r^c in (0, 1) when sp > N
        if diff <= 0.0:
            return -math.inf
        return ((n - 1.0) * ln_rho + p * math.log(diff)
                + log_phi(params, rho, one_minus))

    return log_f


def hardy_constant(params: FracParams, spec: QuadSpec | None = None) -> HardyConstant:
    """Sharp Hardy constant of the punctured space for s*p != N.

    Both integral representations (power-weighted and reduced) are computed
    and cross-checked; the returned value follows the power-weighted path
    with its error enlarged to cover the discrepancy.
    """
    if abs(params.sp - params.dim) <= _CRITICAL_SLACK:
        raise CriticalExponent(f"s*p = N = {params.dim}: the constant degenerates")
    spec = spec or QuadSpec()
    fs = _integral_01_log(_frank_seiringer_log(params), spec).scale(2.0)
    if params.supercritical:
        red = _integral_01_log(_reduced_power_log(params), spec).scale(2.0)
    else:
        # The reduced representation holds only above the critical line,
        # so the subcritical regime keeps the power-weighted path alone.
        red = fs
    err = fs.error + red.error + abs(fs.value - red.value)
    return HardyConstant(
        params=params,
        value=Estimate(fs.value, err, fs.method),
        representation=HardyRepresentation.FRANK_SEIRINGER,
        cross_check=red,
    )


def c_beta(be: BetaExponent, spec: QuadSpec | None = None) -> Estimate:
    """The supersolution constant C(beta), positive on the admissible range.

    Implemented uniformly in the dimension through the angular kernel,
    using that 2 pi alpha_N G(rho^2) equals the kernel for N >= 2 and the
    elementary closed form for N = 1.
    """
    params, beta_exp = be.params, be.beta
    sp, p, n = params.sp, params.p, params.dim
    q = sp - beta_exp * (p - 1.0)
    spec = spec or QuadSpec()

    def log_f(rho, one_minus, ln_rho):
        a = -math.expm1(beta_exp * ln_rho)  # 1 - rho^beta in (0, 1)
        d = -math.expm1((q - n) * ln_rho)  # 1 - rho^(q-N), positive: q > N
        if a <= 0.0 or d <= 0.0:
            return -math.inf
        return ((p - 1.0) * math.log(a) + (n - 1.0) * ln_rho + math.log(d)
                + log_phi(params, rho, one_minus))

    return _integral_01_log(log_f, spec).scale(2.0)


def k_pn(n: int, p: float) -> Estimate:
    """(1/p) times the p-th moment of a coordinate over the unit sphere.

    Reduces to (1/p) |S^(N-2)| B((p+1)/2, (N-1)/2) for N >= 2 and to 2/p
    for N = 1 (two unit points).
    """
    if n < 1 or int(n) != n or p <= 1.0:
        raise DomainValidationError(
            f"k_pn requires integer N >= 1 and p > 1, got ({n}, {p})"
        )
    if n == 1:
        return Estimate(2.0 / p, 1e-16 / p, Method.CLOSED_FORM)
    area = specfun.sphere_area(n - 2)
    b = specfun.beta((p + 1.0) / 2.0, (n - 1.0) / 2.0)
    val = area.value * b.value / p
    err = (area.value * b.abs_error + b.value * area.abs_error) / p
    return Estimate(val, err, Method.CLOSED_FORM)


def lower_bound_open_set(params: FracParams, spec: QuadSpec | None = None) -> Estimate:
    """Universal Hardy lower bound for every open proper subset, s*p > N."""
    if params.sp <= params.dim + _CRITICAL_SLACK:
        raise CriticalExponent(
            f"universal lower bound needs s*p > N, got s*p = {params.sp}"
        )
    return hardy_constant(params, spec).value
