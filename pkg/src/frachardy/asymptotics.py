"""Limit verification for the Hardy constant: the s -> 1 normalization limit
(1-s) h_{s,p} -> K_{p,N} ((p-N)/p)^p and the p -> infinity limit
h_{s,p}^(1/p) -> 1, together with Richardson extrapolation machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import specfun
from .constants import hardy_constant, k_pn
from .errors import DomainValidationError, InsufficientSamples
from .kernel import FracParams
from .quadrature import Estimate, Method, QuadSpec, integrate


@dataclass(frozen=True)
class LimitReport:
    """Outcome of a numerical limit verification.

    ``samples`` are (parameter, value) pairs ordered in the limiting
    parameter, ``extrapolated`` is the accelerated estimate, and
    ``lower_bounds`` (p -> infinity only) carries the explicit chain lower
    bound per grid point as (bound, composed_error) pairs.
    """

    target: float
    samples: tuple
    extrapolated: Estimate
    converged: bool
    sequence_monotone_flag: bool
    lower_bounds: tuple | None = None


def richardson_extrapolate(samples, order_hint: float = 1.0) -> Estimate:
    """Accelerate value(h) -> L as h -> 0 by polynomial extrapolation.

    ``samples`` is a list of (h, value) with h strictly decreasing toward
    zero.  A Neville table in x = h**order_hint is built down to x = 0; the
    error is the spread of the last two table columns.
    """
    if order_hint <= 0.0:
        raise DomainValidationError("order_hint must be positive")
    n = len(samples)
    if n < 3:
        raise InsufficientSamples(f"richardson_extrapolate needs >= 3 samples, got {n}")
    hs = [h for h, _ in samples]
    if any(b >= a for a, b in zip(hs, hs[1:])) or hs[-1] <= 0.0:
        raise DomainValidationError("h values must be strictly decreasing and positive")
    x = [h ** order_hint for h in hs]
    col = [v for _, v in samples]
    prev_tail = col[-1]
    for k in range(1, n):
        nxt = []
        for i in range(n - k):
            num = x[i] * col[i + 1] - x[i + k] * col[i]
            nxt.append(num / (x[i] - x[i + k]))
        prev_tail = col[-1]
        col = nxt
    return Estimate(col[0], abs(col[0] - prev_tail), Method.EXTRAPOLATION)


def _monotone_tail(devs, tail: int = 4) -> bool:
    window = devs[-tail:] if len(devs) >= tail else devs
    return all(b <= a + 1e-15 for a, b in zip(window, window[1:]))


def limit_s_to_1(n: int, p: float, s_grid=None, spec: QuadSpec | None = None) -> LimitReport:
    """Verify (1-s) h_{s,p} -> K_{p,N} ((p-N)/p)^p on an s-grid rising to 1.

    Convergence means the Richardson-extrapolated value agrees with the
    closed-form target within max(1 percent, extrapolation error).
    """
    if p <= n:
        raise DomainValidationError(f"the s -> 1 limit needs p > N, got p = {p}, N = {n}")
    if s_grid is None:
        s_grid = [1.0 - 2.0 ** (-k) for k in range(3, 8)]
    s_grid = list(s_grid)
    if any(b <= a for a, b in zip(s_grid, s_grid[1:])):
        raise DomainValidationError("s_grid must be strictly increasing")
    target = k_pn(n, p).value * ((p - n) / p) ** p
    samples = tuple(
        (s, (1.0 - s) * hardy_constant(FracParams(n, s, p), spec).value.value)
        for s in s_grid
    )
    rich = richardson_extrapolate([(1.0 - s, v) for s, v in samples], order_hint=1.0)
    tol = max(0.01 * abs(target), rich.error)
    extrapolated = Estimate(rich.value, tol, Method.EXTRAPOLATION)
    converged = abs(rich.value - target) <= tol
    monotone = _monotone_tail([abs(v - target) for _, v in samples])
    return LimitReport(target, samples, extrapolated, converged, monotone)


def c_n_constant(n: int) -> Estimate:
    """The dimensional constant of the explicit p -> infinity lower bound:
    2 for N = 1, else 2 |S^(N-2)| int_{1/2}^1 (1 - t^2)^((N-3)/2) dt.
    """
    if n < 1 or int(n) != n:
        raise DomainValidationError(f"dimension must be a positive integer, got {n}")
    if n == 1:
        return Estimate(2.0, 0.0, Method.CLOSED_FORM)
    area = specfun.sphere_area(n - 2)
    half = integrate(lambda t: (1.0 - t * t) ** ((n - 3) / 2.0), 0.5, 1.0)
    return half.scale(2.0 * area.value)


def _chain_lower_bound(n: int, s: float, p: float, p0: float) -> Estimate:
    """C_N^(1/p) (int_0^1 r^(N-1) (1 - r^(s - N/p0))^p dr)^(1/p).

    With u = r^a, a = s - N/p0, the inner integral is (1/a) B(N/a, p + 1),
    evaluated in log form to avoid underflow at large p.
    """
    cn = c_n_constant(n)
    a = s - n / p0
    log_inner = specfun.beta_ln(n / a, p + 1.0) - math.log(a)
    val = math.exp((math.log(cn.value) + log_inner) / p)
    rel = (cn.error / cn.value) / p + 1e-13
    return Estimate(val, abs(val) * rel, Method.CLOSED_FORM)


def limit_p_to_inf(n: int, s: float, p_grid=None, spec: QuadSpec | None = None) -> LimitReport:
    """Verify h_{s,p}^(1/p) -> 1 along an increasing p-grid with s p > N.

    Every sample is checked against the explicit dimensional lower bound
    chain (anchored at p0 = min of the grid); the per-point bounds are
    returned in ``lower_bounds`` and a failure raises
    DomainValidationError since the inequality is pointwise.
    """
    if p_grid is None:
        p_grid = [2.0 ** k for k in range(1, 8)]
    p_grid = [float(p) for p in p_grid]
    if any(b <= a for a, b in zip(p_grid, p_grid[1:])):
        raise DomainValidationError("p_grid must be strictly increasing")
    if s * p_grid[0] <= n:
        raise DomainValidationError(
            f"need s * p > N on the whole grid, got s * p_min = {s * p_grid[0]}"
        )
    p0 = p_grid[0]
    samples = []
    bounds = []
    for p in p_grid:
        h = hardy_constant(FracParams(n, s, p), spec).value
        root = h.value ** (1.0 / p)
        root_err = root * h.error / (p * max(h.value, 1e-300))
        bound = _chain_lower_bound(n, s, p, p0)
        samples.append((p, root))
        bounds.append((bound.value, bound.error + root_err))
        if root < bound.value - (bound.error + root_err):
            raise DomainValidationError(
                f"sample h^(1/p) = {root} at p = {p} fell below its lower bound {bound.value}"
            )
    rich = richardson_extrapolate([(1.0 / p, v) for p, v in samples], order_hint=1.0)
    devs = [abs(v - 1.0) for _, v in samples]
    converged = devs[-1] < 0.1
    extrapolated = Estimate(rich.value, max(rich.error, abs(rich.value - 1.0)),
                            Method.EXTRAPOLATION)
    return LimitReport(1.0, tuple(samples), extrapolated, converged,
                       _monotone_tail(devs), tuple(bounds))
