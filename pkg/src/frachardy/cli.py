"""Command-line interface: constants, kernels, limits, bounds, Rayleigh
quotients, supersolution campaigns, and parameter scans, with deterministic
JSON/CSV/table output.

Exit codes: 0 success, 1 validation error, 2 a verification campaign found a
violation, 3 a quadrature failed to converge.

A JSON config file (``--config``) supplies defaults for any long flag (keys
use underscores, e.g. ``{"rel_tol": 1e-8}``); explicit command-line flags
override it.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import asymptotics, bounds, geometry, rayleigh, supersol
from .constants import BetaExponent, c_beta, hardy_constant, k_pn
from .errors import FracHardyError, Nonconvergent
from .kernel import FracParams, log_phi, phi
from .quadrature import McSpec, QuadSpec

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_VIOLATION = 2
EXIT_NONCONVERGENT = 3


class _Parser(argparse.ArgumentParser):
    """argparse with the validation exit code instead of the default 2."""

    def error(self, message):
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def parse_grid(text: str, count_min: int = 1, geometric: bool = False):
    """Parse ``lo:hi:count`` into a list of floats (single float allowed)."""
    parts = text.split(":")
    if len(parts) == 1:
        return [float(parts[0])]
    if len(parts) != 3:
        raise ValueError(f"grid must be 'lo:hi:count', got {text!r}")
    lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    if count < count_min or lo <= 0 and geometric:
        raise ValueError(f"bad grid {text!r}")
    if count == 1:
        return [lo]
    if geometric:
        return [float(v) for v in np.geomspace(lo, hi, count)]
    return [float(v) for v in np.linspace(lo, hi, count)]


def emit(rows, fmt: str, stream) -> None:
    """Serialize ``rows`` (list of dicts sharing one key set) to ``stream``."""
    if not rows:
        raise ValueError("nothing to emit")
    keys = list(rows[0].keys())
    if fmt == "json":
        doc = {"schema_version": SCHEMA_VERSION, "rows": rows}
        json.dump(doc, stream, indent=2, default=_fmt)
        stream.write("\n")
    elif fmt == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["schema_version"] + keys)
        for row in rows:
            writer.writerow([SCHEMA_VERSION] + [_fmt(row[k]) for k in keys])
    elif fmt == "table":
        cells = [[_fmt(row[k]) for k in keys] for row in rows]
        widths = [max(len(k), *(len(c[i]) for c in cells))
                  for i, k in enumerate(keys)]
        stream.write("  ".join(k.ljust(w) for k, w in zip(keys, widths)).rstrip())
        stream.write("\n")
        for c in cells:
            stream.write("  ".join(v.ljust(w) for v, w in zip(c, widths)).rstrip())
            stream.write("\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")


def parse_artifact(text: str):
    """Round-trip reader for emitted JSON and CSV artifacts."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        doc = json.loads(text)
        return doc["rows"]
    reader = csv.DictReader(io.StringIO(text))
    return [dict(row) for row in reader]


def _params(args) -> FracParams:
    return FracParams(args.dim, args.s, args.p)


def _quad_spec(args) -> QuadSpec:
    return QuadSpec(rel_tol=args.rel_tol, abs_tol=args.abs_tol)


def _mc_spec(args) -> McSpec:
    return McSpec(samples=args.samples, seed=args.seed)


def _domain(args) -> geometry.DomainModel:
    kind = args.domain
    if kind == "punctured":
        # 1D: "0,1,3"; higher dimensions separate coordinates with ';',
        # e.g. "0;0,1;2" for the planar points (0,0) and (1,2)
        pts = [tuple(float(v) for v in grp.split(";"))
               for grp in args.punctures.split(",")]
        return geometry.punctured_space(args.dim, pts)
    if kind == "ball":
        return geometry.ball(args.dim, args.radius)
    if kind == "box":
        sides = tuple(float(v) for v in args.sides.split(","))
        return geometry.box(sides)
    if kind == "half-space":
        return geometry.half_space(args.dim)
    raise ValueError(f"unknown domain {kind!r}")


def _config_row(args, fields) -> dict:
    return {k: getattr(args, k) for k in fields if hasattr(args, k)}


def _cmd_constant(args, out):
    h = hardy_constant(_params(args), _quad_spec(args))
    emit([{
        "command": "constant", "N": args.dim, "s": args.s, "p": args.p,
        "value": h.value.value, "error": h.value.error,
        "method": h.representation.value,
        "cross_check": h.cross_check.value,
        "cross_check_error": h.cross_check.error,
        "rel_tol": args.rel_tol, "abs_tol": args.abs_tol, "seed": args.seed,
    }], args.format, out)
    return EXIT_OK


def _resolve_beta(args, params: FracParams) -> BetaExponent:
    upper = (params.sp - params.dim) / (params.p - 1.0)
    named = {"low": 0.25, "mid": 0.5, "high": 0.75}
    if args.beta in named:
        return BetaExponent(named[args.beta] * upper, params)
    return BetaExponent(float(args.beta), params)


def _cmd_cbeta(args, out):
    params = _params(args)
    be = _resolve_beta(args, params)
    est = c_beta(be, _quad_spec(args))
    emit([{
        "command": "cbeta", "N": args.dim, "s": args.s, "p": args.p,
        "beta": be.beta, "value": est.value, "error": est.error,
        "rel_tol": args.rel_tol, "abs_tol": args.abs_tol, "seed": args.seed,
    }], args.format, out)
    return EXIT_OK


def _cmd_kernel(args, out):
    params = _params(args)
    rows = []
    for r in parse_grid(args.r):
        rows.append({
            "command": "kernel", "N": args.dim, "s": args.s, "p": args.p,
            "r": r, "phi": phi(params, r).value,
            "log_phi": log_phi(params, r),
            "seed": args.seed,
        })
    emit(rows, args.format, out)
    return EXIT_OK


def _cmd_kpn(args, out):
    est = k_pn(args.dim, args.p)
    emit([{
        "command": "kpn", "N": args.dim, "p": args.p,
        "value": est.value, "error": est.error, "seed": args.seed,
    }], args.format, out)
    return EXIT_OK


def _limit_row(args, report, name, param_key):
    rows = []
    for x, v in report.samples:
        rows.append({
            "command": name, "N": args.dim, param_key: x, "value": v,
            "target": report.target,
            "extrapolated": report.extrapolated.value,
            "extrapolation_error": report.extrapolated.error,
            "converged": report.converged,
            "monotone": report.sequence_monotone_flag,
            "seed": args.seed,
        })
    return rows


def _cmd_limit_s1(args, out):
    grid = parse_grid(args.s_grid, geometric=args.geometric) if args.s_grid else None
    report = asymptotics.limit_s_to_1(args.dim, args.p, grid, _quad_spec(args))
    emit(_limit_row(args, report, "limit-s1", "s"), args.format, out)
    return EXIT_OK


def _cmd_limit_pinf(args, out):
    grid = parse_grid(args.p_grid, geometric=args.geometric) if args.p_grid else None
    report = asymptotics.limit_p_to_inf(args.dim, args.s, grid, _quad_spec(args))
    rows = _limit_row(args, report, "limit-pinf", "p")
    for row, (bound, err) in zip(rows, report.lower_bounds):
        row["chain_lower_bound"] = bound
        row["chain_bound_error"] = err
    emit(rows, args.format, out)
    return EXIT_OK


def _cmd_bounds(args, out):
    params = _params(args)
    rep = bounds.eigenvalue_lower_bounds(params, _domain(args), _quad_spec(args))
    frac = rep.fractional_cheeger_bound
    imp = rep.improved_classical
    emit([{
        "command": "bounds", "N": args.dim, "s": args.s, "p": args.p,
        "domain": rep.domain.kind.value,
        "inradius_bound": rep.inradius_bound.value,
        "inradius_bound_error": rep.inradius_bound.error,
        "cheeger_bound": rep.cheeger_bound.value,
        "cheeger_bound_error": rep.cheeger_bound.error,
        "fractional_cheeger_heuristic": frac.value if frac else math.nan,
        "improved_classical": imp.value if imp else math.nan,
        "lambda_s_infinity": rep.lambda_s_infinity,
        "seed": args.seed,
    }], args.format, out)
    return EXIT_OK


def _cmd_rayleigh(args, out):
    params = _params(args)
    d = _domain(args)
    u = rayleigh.power_distance(args.dim, args.trial_beta, args.trial_a,
                                args.trial_r, tuple(
                                    float(v) for v in args.center.split(",")))
    q = rayleigh.hardy_quotient(params, d, u, _quad_spec(args), _mc_spec(args))
    emit([{
        "command": "rayleigh", "N": args.dim, "s": args.s, "p": args.p,
        "domain": d.kind.value,
        "seminorm_p": q.seminorm_p.value, "seminorm_error": q.seminorm_p.error,
        "weight_integral": q.weight_integral.value,
        "weight_error": q.weight_integral.error,
        "quotient": q.quotient.value, "quotient_error": q.quotient.error,
        "seed": args.seed,
    }], args.format, out)
    return EXIT_OK


def _cmd_verify_supersol(args, out):
    params = _params(args)
    pts = [(float(v),) if args.dim == 1
           else tuple(float(w) for w in v.split(";"))
           for v in args.punctures.split(",")]
    d = geometry.punctured_space(args.dim, pts)
    be = _resolve_beta(args, params)
    phis = supersol.bump_corpus(d, args.tests, args.seed)
    results = supersol.verify_supersolution(params, d, be, phis,
                                            _quad_spec(args), _mc_spec(args))
    rows = []
    for i, (phi_u, res) in enumerate(zip(phis, results)):
        rows.append({
            "command": "verify-supersol", "N": args.dim, "s": args.s,
            "p": args.p, "beta": be.beta, "test_index": i,
            "center": ";".join(_fmt(c) for c in phi_u.center),
            "radius": phi_u.support_radius,
            "lhs": res.lhs.value, "rhs": res.rhs.value,
            "residual": res.residual.value,
            "residual_error": res.residual.error,
            "verdict": res.verdict.value, "seed": args.seed,
        })
    emit(rows, args.format, out)
    if any(r.verdict == supersol.Verdict.VIOLATION for r in results):
        return EXIT_VIOLATION
    return EXIT_OK


def _scan_cell(task):
    n, s, p, spec = task
    try:
        params = FracParams(n, s, p)
        h = hardy_constant(params, spec)
        be = BetaExponent((params.sp - n) / p, params)
        cb = c_beta(be, spec)
        resid = abs(cb.value - h.value.value) / abs(h.value.value)
        return h.value.value, h.value.error, resid
    except FracHardyError:
        return math.nan, math.nan, math.nan


def _cmd_scan(args, out):
    s_grid = parse_grid(args.s, geometric=args.geometric_s)
    p_grid = parse_grid(args.p, geometric=args.geometric_p)
    spec = _quad_spec(args)
    tasks = [(args.dim, s, p, spec) for s in s_grid for p in p_grid]
    threads = max(int(os.environ.get("FRAC_HARDY_THREADS", "1")), 1)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            cells = list(pool.map(_scan_cell, tasks))
    else:
        cells = [_scan_cell(t) for t in tasks]
    rows = []
    for (n, s, p, _), (val, err, resid) in zip(tasks, cells):
        rows.append({"N": n, "s": s, "p": p, "h_sp": val, "err": err,
                     "c_beta_id_residual": resid})
    emit(rows, args.format, out)
    return EXIT_OK


def _add_common(sub, dim=True, s=True, p=True):
    if dim:
        sub.add_argument("--dim", type=int, required=True)
    if s:
        sub.add_argument("--s", type=float, required=True)
    if p:
        sub.add_argument("--p", type=float, required=True)
    sub.add_argument("--rel-tol", type=float, default=1e-10)
    sub.add_argument("--abs-tol", type=float, default=1e-14)
    sub.add_argument("--samples", type=int, default=200_000)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--format", choices=("json", "csv", "table"),
                     default="table")
    sub.add_argument("--output", default=None)
    sub.add_argument("--config", default=None,
                     help="JSON file of flag defaults")


def _add_domain_flags(sub):
    sub.add_argument("--domain",
                     choices=("punctured", "ball", "box", "half-space"),
                     default="ball")
    sub.add_argument("--radius", type=float, default=1.0)
    sub.add_argument("--sides", default="1,1")
    sub.add_argument("--punctures", default="0")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="frachardy",
                     description="Sharp fractional Hardy constants, "
                                 "supersolution verification, and bounds.")
    parser.add_argument("--config", default=None,
                        help="JSON file of flag defaults")
    subs = parser.add_subparsers(dest="command", required=True)

    sc = subs.add_parser("constant", help="sharp Hardy constant")
    _add_common(sc)
    sc.set_defaults(fn=_cmd_constant)

    sc = subs.add_parser("cbeta", help="supersolution constant C(beta)")
    _add_common(sc)
    sc.add_argument("--beta", default="mid")
    sc.set_defaults(fn=_cmd_cbeta)

    sc = subs.add_parser("kernel", help="angular kernel values")
    _add_common(sc)
    sc.add_argument("--r", required=True, help="value or lo:hi:count")
    sc.set_defaults(fn=_cmd_kernel)

    sc = subs.add_parser("kpn", help="normalization constant K_{p,N}")
    _add_common(sc, s=False)
    sc.set_defaults(fn=_cmd_kpn)

    sc = subs.add_parser("limit-s1", help="s -> 1 limit verification")
    _add_common(sc, s=False)
    sc.add_argument("--s-grid", default=None, help="lo:hi:count")
    sc.add_argument("--geometric", action="store_true")
    sc.set_defaults(fn=_cmd_limit_s1)

    sc = subs.add_parser("limit-pinf", help="p -> infinity limit verification")
    _add_common(sc, p=False)
    sc.add_argument("--p-grid", default=None, help="lo:hi:count")
    sc.add_argument("--geometric", action="store_true")
    sc.set_defaults(fn=_cmd_limit_pinf)

    sc = subs.add_parser("bounds", help="eigenvalue lower bounds")
    _add_common(sc)
    _add_domain_flags(sc)
    sc.set_defaults(fn=_cmd_bounds)

    sc = subs.add_parser("rayleigh", help="Hardy Rayleigh quotient")
    _add_common(sc)
    _add_domain_flags(sc)
    sc.add_argument("--trial-beta", type=float, default=0.5)
    sc.add_argument("--trial-a", type=float, default=0.1)
    sc.add_argument("--trial-r", type=float, default=10.0)
    sc.add_argument("--center", default="0")
    sc.set_defaults(fn=_cmd_rayleigh)

    sc = subs.add_parser("verify-supersol", help="supersolution campaign")
    _add_common(sc)
    sc.add_argument("--punctures", default="0")
    sc.add_argument("--beta", default="mid")
    sc.add_argument("--tests", type=int, default=20)
    sc.set_defaults(fn=_cmd_verify_supersol)

    sc = subs.add_parser("scan", help="grid scan of the Hardy constant")
    _add_common(sc, s=False, p=False)
    sc.add_argument("--s", required=True, help="value or lo:hi:count")
    sc.add_argument("--p", required=True, help="value or lo:hi:count")
    sc.add_argument("--geometric-s", action="store_true")
    sc.add_argument("--geometric-p", action="store_true")
    sc.set_defaults(fn=_cmd_scan)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    # config file defaults: pre-scan for --config, apply, then parse fully
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(argv)
    if known.config:
        try:
            with open(known.config) as fh:
                overrides = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            print(f"frachardy: bad config file: {exc}", file=sys.stderr)
            return EXIT_VALIDATION
        for sub_action in parser._subparsers._group_actions:
            for sub in sub_action.choices.values():
                sub.set_defaults(**overrides)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.output:
            with open(args.output, "w", newline="") as fh:
                return args.fn(args, fh)
        return args.fn(args, sys.stdout)
    except Nonconvergent as exc:
        print(f"frachardy: quadrature did not converge: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENT
    except (FracHardyError, ValueError) as exc:
        print(f"frachardy: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
