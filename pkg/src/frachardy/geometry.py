"""Domain models with exact distance functions, inradii, Cheeger constants
where a closed or semi-closed formula exists, and the fractional perimeter
of balls.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import DomainValidationError, UnsupportedDomain
from .kernel import FracParams, log_phi
from .quadrature import EndpointMode, Estimate, Method, QuadSpec, integrate


class DomainKind(str, enum.Enum):
    PUNCTURED_SPACE = "punctured_space"
    BALL = "ball"
    BOX = "box"
    HALF_SPACE = "half_space"


@dataclass(frozen=True)
class DomainModel:
    """A domain with an exactly computable distance-to-boundary function.

    punctured_space: the complement of a finite point set (``punctures``).
    ball: open ball of radius ``radius`` about ``center``.
    box: open axis-aligned box (0, sides[0]) x ... x (0, sides[N-1]).
    half_space: the upper half space {x_N > 0}.
    """

    kind: DomainKind
    dim: int
    punctures: tuple = ()
    center: tuple = ()
    radius: float = 0.0
    sides: tuple = ()

    def __post_init__(self):
        if self.dim < 1 or int(self.dim) != self.dim:
            raise DomainValidationError(f"dimension must be a positive integer, got {self.dim}")
        if self.kind == DomainKind.PUNCTURED_SPACE:
            pts = tuple(tuple(float(c) for c in p) for p in self.punctures)
            if not pts:
                raise DomainValidationError("punctured_space needs at least one puncture")
            if any(len(p) != self.dim for p in pts):
                raise DomainValidationError("puncture dimension mismatch")
            for i in range(len(pts)):
                for j in range(i + 1, len(pts)):
                    if pts[i] == pts[j]:
                        raise DomainValidationError("punctures must be pairwise distinct")
            object.__setattr__(self, "punctures", pts)
        elif self.kind == DomainKind.BALL:
            if self.radius <= 0.0:
                raise DomainValidationError(f"ball radius must be positive, got {self.radius}")
            c = tuple(float(x) for x in (self.center or (0.0,) * self.dim))
            if len(c) != self.dim:
                raise DomainValidationError("ball center dimension mismatch")
            object.__setattr__(self, "center", c)
        elif self.kind == DomainKind.BOX:
            sides = tuple(float(a) for a in self.sides)
            if len(sides) != self.dim or any(a <= 0.0 for a in sides):
                raise DomainValidationError(f"box needs {self.dim} positive side lengths")
            object.__setattr__(self, "sides", sides)


def punctured_space(dim: int, punctures=((0.0,),)) -> DomainModel:
    pts = tuple(tuple(p) if hasattr(p, "__len__") else (float(p),) for p in punctures)
    return DomainModel(DomainKind.PUNCTURED_SPACE, dim, punctures=pts)


def ball(dim: int, radius: float, center=None) -> DomainModel:
    return DomainModel(DomainKind.BALL, dim, radius=radius,
                       center=tuple(center) if center is not None else ())


def box(sides) -> DomainModel:
    sides = tuple(float(a) for a in sides)
    return DomainModel(DomainKind.BOX, len(sides), sides=sides)


def half_space(dim: int) -> DomainModel:
    return DomainModel(DomainKind.HALF_SPACE, dim)


def distance_to_boundary(d: DomainModel, x) -> float:
    """min distance from x to the boundary, extended by 0 outside."""
    x = tuple(float(c) for c in (x if hasattr(x, "__len__") else (x,)))
    if len(x) != d.dim:
        raise DomainValidationError(f"point dimension {len(x)} != domain dimension {d.dim}")
    if d.kind == DomainKind.PUNCTURED_SPACE:
        return min(math.dist(x, p) for p in d.punctures)
    if d.kind == DomainKind.BALL:
        return max(0.0, d.radius - math.dist(x, d.center))
    if d.kind == DomainKind.BOX:
        per_axis = [min(c, a - c) for c, a in zip(x, d.sides)]
        return max(0.0, min(per_axis))
    return max(0.0, x[-1])


def inradius(d: DomainModel) -> float:
    if d.kind == DomainKind.BALL:
        return d.radius
    if d.kind == DomainKind.BOX:
        return min(d.sides) / 2.0
    return math.inf


def cheeger_h1(d: DomainModel) -> Estimate:
    """The classical Cheeger constant where a semi-exact formula exists.

    Balls give N/R.  A planar box (a x b) gives 1/r* with r* the unique
    root of (a - 2r)(b - 2r) = pi r^2 in (0, min(a,b)/2), located by
    bisection to 1e-12 (the Cheeger set is the box eroded by r* with
    rounded corners).
    """
    if d.kind == DomainKind.BALL:
        return Estimate(d.dim / d.radius, 1e-16 * d.dim / d.radius, Method.CLOSED_FORM)
    if d.kind == DomainKind.BOX and d.dim == 2:
        a, b = d.sides

        def g(r):
            return (a - 2.0 * r) * (b - 2.0 * r) - math.pi * r * r

        lo, hi = 0.0, min(a, b) / 2.0
        while hi - lo > 1e-12 * min(a, b):
            mid = 0.5 * (lo + hi)
            if g(mid) > 0.0:
                lo = mid
            else:
                hi = mid
        r_star = 0.5 * (lo + hi)
        return Estimate(1.0 / r_star, 1e-11 / r_star, Method.CLOSED_FORM)
    raise UnsupportedDomain(
        f"no Cheeger formula for kind {d.kind.value} in dimension {d.dim}"
    )


def s_perimeter_ball(n: int, s: float, radius: float, spec: QuadSpec | None = None) -> Estimate:
    """Fractional s-perimeter of the ball B_R, via P_s(B_R) = R^(N-s) P_s(B_1).

    For the unit ball the indicator seminorm reduces over radial shells to
    2 |S^(N-1)| / (N - s) * int_0^1 q^(N-1) (q^(s-N) - 1) Phi(q) dq with the
    angular kernel taken at exponent N + s.
    """
    if n < 1 or int(n) != n:
        raise DomainValidationError(f"dimension must be a positive integer, got {n}")
    if not 0.0 < s < 1.0:
        raise DomainValidationError(f"s must lie in (0, 1), got {s}")
    if radius <= 0.0:
        raise DomainValidationError(f"radius must be positive, got {radius}")
    spec = spec or QuadSpec()
    params = FracParams(n, s, max(2.0, (n + 1.0) / s))  # carrier; kernel_p=1 below

    def log_f(q, one_minus, ln_q):
        e = (s - n) * ln_q  # q^(s-N) - 1 > 0, log-evaluated when huge
        if e > 30.0:
            log_diff = e + math.log1p(-math.exp(-e))
        else:
            diff = math.expm1(e)
            if diff <= 0.0:
                return -math.inf
            log_diff = math.log(diff)
        return ((n - 1.0) * ln_q + log_diff
                + log_phi(params, q, one_minus, kernel_p=1.0))

    def f_plain(q):
        if q <= 0.0:
            return 0.0
        v = log_f(q, 1.0 - q, math.log(q))
        return 0.0 if v == -math.inf else math.exp(v)

    left = integrate(
        f_plain, 0.0, 0.5,
        QuadSpec(spec.rel_tol, spec.abs_tol, spec.max_subdivisions, EndpointMode.LEFT_SINGULAR),
    )

    def g(w):
        one_minus = math.exp(-w)
        q = 1.0 - one_minus
        return math.exp(log_f(q, one_minus, math.log1p(-one_minus)) - w)

    right = integrate(g, math.log(2.0), math.inf, spec)
    scale = 2.0 * specfun.sphere_area(n - 1).value / (n - s)
    unit = (left + right).scale(scale)
    return unit.scale(radius ** (n - s))


def lipschitz_certificate(d: DomainModel, points, tol: float = 1e-12) -> bool:
    """Check |d(x) - d(y)| <= |x - y| + tol over all sampled point pairs."""
    pts = [tuple(float(c) for c in p) for p in points]
    vals = [distance_to_boundary(d, p) for p in pts]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if abs(vals[i] - vals[j]) > math.dist(pts[i], pts[j]) + tol:
                return False
    return True
