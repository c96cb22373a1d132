"""Gagliardo seminorms and Hardy/Poincare Rayleigh quotients for explicit
radial trial functions.

The deterministic seminorm path uses the exact radial reduction

    [u]^p = 2 |S^(N-1)| int_0^1 q^(N-1) Phi(q)
              [ int_0^inf |v(r) - v(qr)|^p r^(N-sp-1) dr ] dq

for u(x) = v(|x - c|), with the angular kernel Phi evaluated only at outer
nodes.  The Monte Carlo path importance-samples offsets near the diagonal
and closes the far field with the exact closed-form tail of a compactly
supported function.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import (DomainValidationError, Nonconvergent, SupportViolation,
                     TailDominates)
from .geometry import DomainKind, DomainModel, distance_to_boundary
from .kernel import FracParams, log_phi
from .quadrature import (EndpointMode, Estimate, McSpec, Method, QuadSpec,
                         integrate, integrate_mc, make_rng)

_SUPPORT_MARGIN = 1e-12


class TrialKind(str, enum.Enum):
    POWER_DISTANCE = "power_distance"
    CONE_S = "cone_s"
    CUSTOM = "custom"


@dataclass(frozen=True)
class TrialFunction:
    """A radial trial u(x) = v(|x - center|) vanishing outside its support.

    power_distance: v linear on [0, a], r^beta on [a, R], linear taper on
    [R, 2R]; support radius 2R.  cone_s: v = (eps + (r0 - r)_+)^sigma -
    eps^sigma, support radius r0.  custom: caller-supplied profile with its
    kink radii listed in ``breakpoints``.
    """

    kind: TrialKind
    dim: int
    center: tuple
    support_radius: float
    holder_exponent: float
    beta: float = 0.0
    inner_a: float = 0.0
    outer_r: float = 0.0
    cone_r: float = 0.0
    eps: float = 0.0
    cone_exp: float = 0.0
    profile_fn: object = None
    breakpoints: tuple = ()

    def __post_init__(self):
        if self.dim < 1:
            raise DomainValidationError("trial dimension must be >= 1")
        if not 0.0 < self.holder_exponent <= 1.0:
            raise DomainValidationError("holder_exponent must lie in (0, 1]")
        if self.support_radius <= 0.0:
            raise DomainValidationError("support_radius must be positive")
        c = tuple(float(x) for x in (self.center or (0.0,) * self.dim))
        if len(c) != self.dim:
            raise DomainValidationError("trial center dimension mismatch")
        object.__setattr__(self, "center", c)
        if self.kind == TrialKind.POWER_DISTANCE:
            if not 0.0 < self.inner_a < self.outer_r:
                raise DomainValidationError("power_distance needs 0 < a < R")
            object.__setattr__(self, "breakpoints",
                               (self.inner_a, self.outer_r, 2.0 * self.outer_r))
        elif self.kind == TrialKind.CONE_S:
            if self.eps <= 0.0 or self.cone_r <= 0.0:
                raise DomainValidationError("cone_s needs eps > 0 and r > 0")
            object.__setattr__(self, "breakpoints", (self.cone_r,))
        elif self.profile_fn is None:
            raise DomainValidationError("custom trials need a profile callable")

    def profile(self, r):
        """Radial profile; scalar fast path, vectorized over numpy arrays."""
        if isinstance(r, (float, int)):
            r = float(r)
            if self.kind == TrialKind.POWER_DISTANCE:
                a, rr, b = self.inner_a, self.outer_r, self.beta
                if r < a:
                    return a ** (b - 1.0) * r
                if r <= rr:
                    return r ** b
                if r < 2.0 * rr:
                    return rr ** b * (2.0 - r / rr)
                return 0.0
            if self.kind == TrialKind.CONE_S:
                if r < self.cone_r:
                    return ((self.eps + self.cone_r - r) ** self.cone_exp
                            - self.eps ** self.cone_exp)
                return 0.0
            return float(self.profile_fn(r))
        r = np.asarray(r, dtype=float)
        if self.kind == TrialKind.POWER_DISTANCE:
            a, rr, b = self.inner_a, self.outer_r, self.beta
            rs = np.maximum(r, 1e-300)
            out = np.select(
                [r < a, r <= rr, r < 2.0 * rr],
                [a ** (b - 1.0) * r, rs ** b, rr ** b * (2.0 - r / rr)],
                0.0,
            )
        elif self.kind == TrialKind.CONE_S:
            core = (self.eps + np.maximum(self.cone_r - r, 0.0)) ** self.cone_exp
            out = np.where(r < self.cone_r, core - self.eps ** self.cone_exp, 0.0)
        else:
            out = np.asarray(self.profile_fn(r), dtype=float)
        return out if out.ndim else float(out)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        r = np.linalg.norm(np.atleast_2d(x) - np.asarray(self.center), axis=-1)
        vals = self.profile(r)
        return vals if np.ndim(x) > 1 else float(np.asarray(vals).ravel()[0])

    def shifted(self, new_center) -> "TrialFunction":
        return dataclasses_replace(self, center=tuple(float(c) for c in new_center))


def dataclasses_replace(u: TrialFunction, **kw) -> TrialFunction:
    import dataclasses

    return dataclasses.replace(u, **kw)


def power_distance(dim: int, beta: float, a: float, big_r: float,
                   center=None) -> TrialFunction:
    return TrialFunction(TrialKind.POWER_DISTANCE, dim,
                         tuple(center) if center is not None else (),
                         support_radius=2.0 * big_r, holder_exponent=1.0,
                         beta=beta, inner_a=a, outer_r=big_r)


def cone_s(dim: int, r0: float, eps: float, sigma: float,
           center=None) -> TrialFunction:
    return TrialFunction(TrialKind.CONE_S, dim,
                         tuple(center) if center is not None else (),
                         support_radius=r0, holder_exponent=sigma,
                         cone_r=r0, eps=eps, cone_exp=sigma)


def custom(dim: int, profile_fn, support_radius: float,
           holder_exponent: float = 1.0, center=None,
           breakpoints=()) -> TrialFunction:
    return TrialFunction(TrialKind.CUSTOM, dim,
                         tuple(center) if center is not None else (),
                         support_radius=support_radius,
                         holder_exponent=holder_exponent,
                         profile_fn=profile_fn, breakpoints=tuple(breakpoints))


@dataclass(frozen=True)
class QuotientResult:
    seminorm_p: Estimate
    weight_integral: Estimate
    quotient: Estimate


def _ratio(num: Estimate, den: Estimate) -> Estimate:
    q = num.value / den.value
    err = abs(q) * (num.error / max(abs(num.value), 1e-300)
                    + den.error / max(abs(den.value), 1e-300))
    return Estimate(q, err, num.method)


def seminorm_radial(params: FracParams, v, truncation: float,
                    breakpoints=(), spec: QuadSpec | None = None) -> Estimate:
    """[u]^p_{W^{s,p}} for the radial u with profile v supported in
    [0, truncation], by the exact radial reduction (no truncation tail:
    the cross region where only one point lies inside the support is the
    inner range r in (T, T/q])."""
    spec = spec or QuadSpec()
    n, p, sp = params.dim, params.p, params.sp
    if abs(float(v(truncation * (1.0 + 1e-9)))) > 0.0:
        raise TailDominates("profile does not vanish beyond the truncation radius")
    brk = sorted(b for b in breakpoints if 0.0 < b < truncation)
    # the outer pass cannot certify tighter than the inner quadrature
    outer_spec = QuadSpec(max(spec.rel_tol, 1e-7), max(spec.abs_tol, 1e-14),
                          spec.max_subdivisions)
    cache: dict = {}

    # limit regime q -> 1: |v(r) - v(qr)| = (1-q) r v'(r) + O((1-q)^2), so
    # the inner integral is (1-q)^p D with D below; switching to this form
    # avoids subtractive cancellation that would otherwise drown the tail.
    limit_cut = 1e-6
    h_fd = 1e-7 * truncation

    def dv(r):
        return (float(v(min(r + h_fd, truncation * (1.0 + 1e-12)))) - float(v(max(r - h_fd, 0.0)))) / (2.0 * h_fd)

    def f_limit(r):
        if r <= 0.0:
            return 0.0
        g = abs(r * dv(r))
        return 0.0 if g == 0.0 else g ** p * r ** (n - sp - 1.0)

    inner_rel = 1e-9 if spec.rel_tol <= 1e-7 else 0.01 * spec.rel_tol
    d_limit = integrate(f_limit, 0.0, truncation,
                        QuadSpec(inner_rel, 1e-14, spec.max_subdivisions), points=brk)
    inner_spec = QuadSpec(inner_rel, max(1e-280, 1e-14 * d_limit.value),
                          spec.max_subdivisions)

    def inner(q, one_minus):
        # int_0^{T/q} |v(r) - v(qr)|^p r^(n-sp-1) dr, with the cross region
        # r in (T, T/q] rewritten through rho = q r to stay on a short
        # interval even for q near 0.
        hit = cache.get(one_minus)
        if hit is not None:
            return hit
        if one_minus <= limit_cut:
            amp = one_minus ** p
            est = Estimate(amp * d_limit.value,
                           amp * (d_limit.error + 10.0 * one_minus * d_limit.value))
            cache[one_minus] = est
            return est

        def f_main(r):
            diff = abs(float(v(r)) - float(v(q * r)))
            if diff == 0.0 or r <= 0.0:
                return 0.0
            return diff ** p * r ** (n - sp - 1.0)

        pts = sorted({*brk, *(b / q for b in brk if b / q < truncation)})
        main = integrate(f_main, 0.0, truncation, inner_spec, points=pts)

        def f_cross(x):
            rho = math.exp(x)
            val = abs(float(v(rho)))
            if val == 0.0:
                return 0.0
            return val ** p * math.exp((n - sp) * x)

        lo = q * truncation
        if q >= 1.0 or math.log(lo) >= math.log(truncation) - 1e-14:
            cross = Estimate(0.0, 0.0)
        else:
            cross = integrate(f_cross, math.log(lo), math.log(truncation), inner_spec,
                              points=[math.log(b) for b in brk if lo < b < truncation])
        est = main + cross.scale(q ** (sp - n))
        cache[one_minus] = est
        return est

    def outer_pass(pick) -> Estimate:
        def log_f(q, one_minus, ln_q):
            if one_minus <= 0.0:
                return -math.inf
            est = inner(q, one_minus)
            if one_minus <= limit_cut:
                # log-form evaluation keeps the far tail alive after q
                # rounds to 1 in floating point
                base = pick(Estimate(d_limit.value,
                                     d_limit.error + 10.0 * one_minus * d_limit.value))
                if base <= 0.0:
                    return -math.inf
                return (p * math.log(one_minus) + math.log(base)
                        + (n - 1.0) * ln_q + log_phi(params, q, one_minus))
            val = pick(est)
            if val <= 0.0:
                return -math.inf
            return (n - 1.0) * ln_q + log_phi(params, q, one_minus) + math.log(val)

        def f_plain(q):
            if q <= 0.0:
                return 0.0
            lf = log_f(q, 1.0 - q, math.log(q))
            return 0.0 if lf == -math.inf else math.exp(lf)

        left = integrate(f_plain, 0.0, 0.5,
                         QuadSpec(outer_spec.rel_tol, outer_spec.abs_tol,
                                  outer_spec.max_subdivisions, EndpointMode.LEFT_SINGULAR))

        def g(w):
            one_minus = math.exp(-w)
            q = 1.0 - one_minus
            lf = log_f(q, one_minus, math.log1p(-one_minus))
            return 0.0 if lf == -math.inf else math.exp(lf - w)

        right = integrate(g, math.log(2.0), math.inf, outer_spec)
        return left + right

    val_pass = outer_pass(lambda e: e.value)
    try:
        err_pass = outer_pass(lambda e: e.error)
        inner_err = abs(err_pass.value)
    except Nonconvergent as exc:  # the error field may be too rough to certify
        inner_err = abs(exc.estimate.value) if exc.estimate else 0.1 * abs(val_pass.value)
    scale = 2.0 * specfun.sphere_area(n - 1).value
    return Estimate(scale * val_pass.value,
                    scale * (val_pass.error + inner_err), val_pass.method)


def seminorm_deterministic(params: FracParams, u: TrialFunction,
                           spec: QuadSpec | None = None) -> Estimate:
    if u.dim != params.dim:
        raise DomainValidationError("trial/parameter dimension mismatch")
    return seminorm_radial(params, u.profile, u.support_radius,
                           u.breakpoints, spec)


def lp_norm_p(params: FracParams, u: TrialFunction,
              spec: QuadSpec | None = None) -> Estimate:
    """int |u|^p over R^N, radial quadrature."""
    n, p = params.dim, params.p

    def f(r):
        val = abs(float(u.profile(r)))
        return 0.0 if val == 0.0 or r <= 0.0 else r ** (n - 1.0) * val ** p

    est = integrate(f, 0.0, u.support_radius, spec, points=list(u.breakpoints))
    return est.scale(specfun.sphere_area(n - 1).value)


def seminorm_mc(params: FracParams, u: TrialFunction, spec: McSpec) -> Estimate:
    """Monte Carlo Gagliardo seminorm: importance-sampled near field plus
    the exact far-field term  2 N omega_N / (sp T^sp) int |u|^p  valid for
    any offset cut T at least the support diameter."""
    if params.dim > 3:
        raise DomainValidationError("seminorm_mc supports N <= 3")
    n, p, sp = params.dim, params.p, params.sp
    s_rad = u.support_radius
    cut = 2.0 * s_rad
    gamma = max(p * (1.0 - params.s), 0.05)
    vol_x = specfun.ball_volume(n).value * (s_rad + cut) ** n
    area = specfun.sphere_area(n - 1).value
    scale = vol_x * area * cut ** gamma / gamma
    center = np.asarray(u.center)

    def sampler(rng, m):
        x = _uniform_ball(rng, m, n, center, s_rad + cut)
        t = cut * rng.random(m) ** (1.0 / gamma)
        direction = _uniform_sphere(rng, m, n)
        return (x, t, direction), np.ones(m)

    def f(sample):
        x, t, direction = sample
        du = np.abs(u(x + t[:, None] * direction) - u(x))
        out = np.zeros_like(t)
        mask = du > 0.0
        out[mask] = scale * du[mask] ** p * t[mask] ** (-sp - gamma)
        return out

    near = integrate_mc(f, sampler, spec)
    lp = lp_norm_p(params, u)
    far = lp.scale(2.0 * n * specfun.ball_volume(n).value / (sp * cut ** sp))
    return near + far


def _uniform_ball(rng, m, n, center, radius):
    g = rng.standard_normal((m, n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    r = radius * rng.random(m) ** (1.0 / n)
    return center + r[:, None] * g


def _uniform_sphere(rng, m, n):
    if n == 1:
        return np.where(rng.random((m, 1)) < 0.5, -1.0, 1.0)
    g = rng.standard_normal((m, n))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def holder_certificate(u: TrialFunction, samples: int = 20000,
                       seed: int = 0) -> float:
    """Largest sampled Holder quotient |u(x)-u(y)| / |x-y|^alpha."""
    rng = make_rng(seed)
    n = u.dim
    c = np.asarray(u.center)
    x = _uniform_ball(rng, samples, n, c, 1.5 * u.support_radius)
    y = _uniform_ball(rng, samples, n, c, 1.5 * u.support_radius)
    dist = np.linalg.norm(x - y, axis=1)
    keep = dist > 1e-12
    quot = np.abs(u(x[keep]) - u(y[keep])) / dist[keep] ** u.holder_exponent
    return float(np.max(quot)) if quot.size else 0.0


def check_support(d: DomainModel, u: TrialFunction):
    """Raise SupportViolation unless u is admissible on d: the support stays
    inside the domain, punctures are only touched where u vanishes."""
    c = np.asarray(u.center)
    s_rad = u.support_radius
    if d.dim != u.dim:
        raise DomainValidationError("trial/domain dimension mismatch")
    if d.kind == DomainKind.BALL:
        if np.linalg.norm(c - np.asarray(d.center)) + s_rad >= d.radius - _SUPPORT_MARGIN:
            raise SupportViolation("trial support reaches the ball boundary")
    elif d.kind == DomainKind.BOX:
        for ci, side in zip(c, d.sides):
            if ci - s_rad <= _SUPPORT_MARGIN or ci + s_rad >= side - _SUPPORT_MARGIN:
                raise SupportViolation("trial support reaches the box boundary")
    elif d.kind == DomainKind.HALF_SPACE:
        if c[-1] - s_rad <= _SUPPORT_MARGIN:
            raise SupportViolation("trial support reaches the half-space boundary")
    else:
        for pt in d.punctures:
            gap = float(np.linalg.norm(c - np.asarray(pt)))
            if gap < s_rad and abs(u(np.asarray(pt, dtype=float))) > 0.0:
                raise SupportViolation(f"trial does not vanish at the puncture {pt}")


def _weight_radial_single_puncture(params: FracParams, u: TrialFunction,
                                   spec: QuadSpec | None) -> Estimate:
    n, p, sp = params.dim, params.p, params.sp

    def f(r):
        val = abs(float(u.profile(r)))
        if val == 0.0 or r <= 0.0:
            return 0.0
        return math.exp((n - 1.0 - sp) * math.log(r) + p * math.log(val))

    est = integrate(f, 0.0, u.support_radius, spec, points=list(u.breakpoints))
    return est.scale(specfun.sphere_area(n - 1).value)


def _weight_radial_centered_ball(params: FracParams, radius: float,
                                 u: TrialFunction, spec: QuadSpec | None) -> Estimate:
    n, p, sp = params.dim, params.p, params.sp

    def f(r):
        val = abs(float(u.profile(r)))
        if val == 0.0 or r <= 0.0:
            return 0.0
        return r ** (n - 1.0) * (radius - r) ** (-sp) * val ** p

    est = integrate(f, 0.0, u.support_radius, spec, points=list(u.breakpoints))
    return est.scale(specfun.sphere_area(n - 1).value)


def _weight_mc(params: FracParams, d: DomainModel, u: TrialFunction,
               mc: McSpec) -> Estimate:
    n, p, sp = params.dim, params.p, params.sp
    center = np.asarray(u.center)
    vol = specfun.ball_volume(n).value * u.support_radius ** n

    def sampler(rng, m):
        return _uniform_ball(rng, m, n, center, u.support_radius), np.full(m, 1.0 / vol)

    def f(x):
        vals = np.abs(u(x))
        out = np.zeros(len(x))
        mask = vals > 0.0
        if np.any(mask):
            dist = np.array([distance_to_boundary(d, xi) for xi in x[mask]])
            out[mask] = vals[mask] ** p / dist ** sp
        return out

    return integrate_mc(f, sampler, mc)


def hardy_quotient(params: FracParams, d: DomainModel, u: TrialFunction,
                   spec: QuadSpec | None = None,
                   mc: McSpec | None = None) -> QuotientResult:
    """Rayleigh quotient [u]^p / int |u|^p / d^(sp): an upper bound for the
    sharp Hardy constant of the domain up to the stated error."""
    check_support(d, u)
    semi = seminorm_deterministic(params, u, spec)
    centered_at_puncture = (
        d.kind == DomainKind.PUNCTURED_SPACE
        and any(tuple(u.center) == tuple(pt) for pt in d.punctures)
        and all(tuple(u.center) == tuple(pt)
                or math.dist(u.center, pt) >= 2.0 * u.support_radius
                for pt in d.punctures)
    )
    if centered_at_puncture:
        weight = _weight_radial_single_puncture(params, u, spec)
    elif d.kind == DomainKind.BALL and tuple(u.center) == tuple(d.center):
        weight = _weight_radial_centered_ball(params, d.radius, u, spec)
    else:
        weight = _weight_mc(params, d, u, mc or McSpec())
    return QuotientResult(semi, weight, _ratio(semi, weight))


def poincare_quotient(params: FracParams, d: DomainModel, u: TrialFunction,
                      spec: QuadSpec | None = None) -> QuotientResult:
    check_support(d, u)
    semi = seminorm_deterministic(params, u, spec)
    weight = lp_norm_p(params, u, spec)
    return QuotientResult(semi, weight, _ratio(semi, weight))
