"""Acceptance suite: every headline identity, limit, inequality, and
determinism guarantee of the library, one test per criterion, each printing
a single pass line with its runtime."""

import json
import math
import time

import numpy as np
import pytest

from frachardy import asymptotics, bounds, cli, geometry, rayleigh, supersol
from frachardy.constants import BetaExponent, c_beta, hardy_constant, k_pn
from frachardy.kernel import FracParams, phi, phi_hypergeometric
from frachardy.quadrature import McSpec, QuadSpec, make_rng


def _report(name, t0):
    print(f"PASS {name} ({time.time() - t0:.1f} s)")


def test_criterion_1_supersolution_identity():
    # C((sp - N)/p) equals the sharp constant through two independent
    # integral pipelines, relative agreement 1e-6
    t0 = time.time()
    pairs = {
        1: [(0.9, 2.0), (0.75, 2.0), (0.6, 3.0), (0.9, 3.0), (0.8, 4.0)],
        2: [(0.9, 3.0), (0.8, 3.0), (0.7, 4.0), (0.95, 2.5), (0.85, 3.5)],
        3: [(0.9, 4.0), (0.8, 4.5), (0.95, 3.5), (0.85, 4.0), (0.75, 5.0)],
    }
    spec = QuadSpec(rel_tol=1e-8)
    for n, sp_pairs in pairs.items():
        for s, p in sp_pairs:
            params = FracParams(n, s, p)
            h = hardy_constant(params, spec).value
            lam = c_beta(BetaExponent((params.sp - n) / p, params), spec)
            resid = abs(lam.value - h.value) / h.value
            assert resid <= 1e-6, (n, s, p, resid)
    _report("criterion 1: supersolution-constant identity", t0)


def test_criterion_2_kernel_dual_path():
    t0 = time.time()
    for n in (2, 3, 4):
        params = FracParams(n, 0.77, 3.1)
        for r in np.arange(0.0, 0.91, 0.1):
            a = phi(params, float(r)).value
            b = phi_hypergeometric(params, float(r)).value
            assert abs(a - b) <= 1e-8 * abs(a), (n, r)
    _report("criterion 2: kernel dual-path agreement", t0)


def test_criterion_3_limit_s_to_1():
    t0 = time.time()
    spec = QuadSpec(rel_tol=1e-8)
    for n, p in ((1, 2.0), (1, 3.0), (2, 5.0)):
        report = asymptotics.limit_s_to_1(n, p, None, spec)
        target = k_pn(n, p).value * ((p - n) / p) ** p
        assert report.target == pytest.approx(target, rel=1e-12)
        assert abs(report.extrapolated.value - target) <= 0.01 * target, (n, p)
        assert report.converged
    _report("criterion 3: s -> 1 limit", t0)


def test_criterion_4_limit_p_to_inf():
    t0 = time.time()
    grid = [2.0 ** k for k in range(1, 8)]
    report = asymptotics.limit_p_to_inf(1, 0.75, grid, QuadSpec(rel_tol=1e-8))
    roots = [v for _, v in report.samples]
    assert abs(roots[-1] - 1.0) < 0.1
    devs = [abs(v - 1.0) for v in roots]
    assert all(b <= a + 1e-12 for a, b in zip(devs[-4:], devs[-3:]))
    for (_, root), (bound, err) in zip(report.samples, report.lower_bounds):
        assert root >= bound - err
    _report("criterion 4: p -> infinity limit", t0)


def test_criterion_5_supersolution_campaign():
    t0 = time.time()
    params = FracParams(1, 0.9, 3.0)
    spec = QuadSpec(rel_tol=1e-3)
    upper = (params.sp - 1.0) / (params.p - 1.0)
    puncture_sets = ([0.0], [0.0, 1.0], [0.0, 1.0, 3.0])
    for pts in puncture_sets:
        d = geometry.punctured_space(1, pts)
        phis = supersol.bump_corpus(d, 20, seed=42)
        for frac in (0.25, 0.5, 0.75):
            beta = BetaExponent(frac * upper, params)
            results = supersol.verify_supersolution(params, d, beta, phis,
                                                    spec)
            assert all(r.verdict is not supersol.Verdict.VIOLATION
                       for r in results), (pts, frac)
    # exact-solution equality at the maximizing exponent
    d = geometry.punctured_space(1, [0.0])
    beta = BetaExponent((params.sp - 1.0) / params.p, params)
    phi_u = supersol.smooth_bump(1, (1.5,), 0.4)
    res = supersol.verify_supersolution(params, d, beta, [phi_u], spec)[0]
    assert abs(res.residual.value) <= res.residual.error
    _report("criterion 5: supersolution campaign", t0)


def test_criterion_6_sandwich_property():
    t0 = time.time()
    params = FracParams(1, 0.9, 3.0)
    h = hardy_constant(params).value
    spec = QuadSpec(rel_tol=1e-3)
    mc = McSpec(samples=60_000, seed=3)
    rng = make_rng(2024)
    domains = (
        ("punctured", geometry.punctured_space(1, [0.0]), 0.0),
        ("ball", geometry.ball(1, 3.0), 0.0),
        ("box", geometry.box((6.0,)), 3.0),
    )
    for i in range(50):
        name, d, center = domains[i % 3]
        beta_t = 0.6 + 0.35 * rng.random()
        a = 0.05 + 0.15 * rng.random()
        big_r = 0.5 + rng.random() if name != "punctured" else 0.5 + 2.0 * rng.random()
        u = rayleigh.power_distance(1, beta_t, a, big_r, center=(center,))
        q = rayleigh.hardy_quotient(params, d, u, spec, mc)
        assert q.quotient.value >= h.value - q.quotient.error - h.error, \
            (i, name, beta_t, a, big_r)
    _report("criterion 6: sandwich property, 50 trials", t0)


def test_criterion_7_bounds_module():
    t0 = time.time()
    params = FracParams(2, 0.9, 3.0)
    spec = QuadSpec(rel_tol=1e-10)
    ball_rep = bounds.eigenvalue_lower_bounds(params, geometry.ball(2, 1.5),
                                              spec)
    assert ball_rep.cheeger_bound.value == pytest.approx(
        ball_rep.inradius_bound.value, rel=1e-12)
    assert bounds.lambda_s_infinity(geometry.ball(2, 2.0), 0.9) == \
        pytest.approx(2.0 ** -0.9, rel=1e-15)
    imp = bounds.improved_cheeger_s1(2, 200.0, 3.0)
    assert imp.value ** (1.0 / 200.0) == pytest.approx(1.5, rel=0.02)
    box_rep = bounds.eigenvalue_lower_bounds(params, geometry.box((1.0, 2.0)),
                                             spec)
    tol = box_rep.cheeger_bound.error + box_rep.inradius_bound.error + 1e-12
    assert box_rep.cheeger_bound.value <= box_rep.inradius_bound.value + tol
    _report("criterion 7: eigenvalue bounds", t0)


def test_criterion_8_scaling_laws():
    t0 = time.time()
    params = FracParams(2, 0.6, 4.0)
    u = rayleigh.power_distance(2, 1.0, 0.2, 0.5, center=(0.0, 0.0))
    tight = QuadSpec(rel_tol=1e-9)
    base = rayleigh.seminorm_deterministic(params, u, tight)
    scale = 2.0
    v = rayleigh.custom(2, lambda r: u.profile(r / scale),
                        support_radius=scale * u.support_radius,
                        breakpoints=tuple(scale * b for b in u.breakpoints))
    scaled = rayleigh.seminorm_deterministic(params, v, tight)
    factor = scale ** (params.dim - params.sp)
    assert scaled.value == pytest.approx(base.value * factor, rel=1e-8)

    per1 = geometry.s_perimeter_ball(2, 0.5, 1.0, tight)
    per2 = geometry.s_perimeter_ball(2, 0.5, 2.0, tight)
    assert per2.value == pytest.approx(per1.value * 2.0 ** (2 - 0.5),
                                       rel=1e-8)
    _report("criterion 8: scaling laws", t0)


def test_criterion_9_mc_determinism(tmp_path):
    t0 = time.time()
    args = ["rayleigh", "--dim", "1", "--s", "0.9", "--p", "2",
            "--domain", "box", "--sides", "6", "--center", "3",
            "--trial-r", "1", "--rel-tol", "1e-3", "--samples", "30000",
            "--seed", "11", "--format", "json"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(args + ["--output", str(a)]) == 0
    assert cli.main(args + ["--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["schema_version"] == 1
    _report("criterion 9: seeded Monte Carlo determinism", t0)
