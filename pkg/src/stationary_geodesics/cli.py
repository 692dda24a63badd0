"""Command-line front end.

Every command takes its parameters from flags, from a JSON ``--config`` file,
or both (flags win).  Reports go to ``--output`` (``-`` for stdout); without
it they are written to ``$STATGEO_OUTPUT_DIR/<command>.<format>`` when that
variable is set and to stdout otherwise.

Exit codes: 0 success, 1 mathematical failure (diagnostic JSON is written in
place of the report), 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Optional

import numpy as np

from . import __version__
from .builtin import builtin_metric
from .connect import (
    Endpoints,
    equatorial_reduction,
    lemma1_limits,
    nonconnect_certificate,
    solve_connection,
)
from .connection import christoffel_closed_form, fd_christoffel, relative_error
from .errors import GeodesicsError, UsageError
from .geodesic import integrate_geodesic, state_from_velocity
from .kerr import (
    BLPoint,
    KerrParams,
    RegionSpec,
    fit_kerr_integrals,
    kerr_first_integral_residuals,
    kerr_metric,
    region_membership,
    space_convexity_witness,
    witness_closed_form,
)
from .ode import IntegratorConfig
from .report import Report, emit_report

OUTPUT_ENV = "STATGEO_OUTPUT_DIR"


def _floats(text) -> tuple:
    if isinstance(text, (list, tuple)):
        return tuple(float(v) for v in text)
    return tuple(float(v) for v in str(text).split(","))


@dataclass(frozen=True)
class Param:
    name: str
    convert: Callable[[Any], Any]
    default: Any
    help: str
    check: Optional[Callable[[Any], bool]] = None
    requirement: str = ""


def _positive(v):
    return v > 0


def _nonneg(v):
    return v >= 0


METRIC = [
    Param("metric", str, "kerr", "kerr, schwarzschild, flat or random-<seed>"),
    Param("m", float, 1.0, "mass", _positive, "must be > 0"),
    Param("a", float, 0.0, "rotation parameter (Kerr)"),
]
TOLERANCES = [
    Param("rel_tol", float, 1e-10, "relative tolerance", _positive, "must be > 0"),
    Param("abs_tol", float, 1e-12, "absolute tolerance", _positive, "must be > 0"),
    Param("max_step", float, 0.1, "largest step", _positive, "must be > 0"),
]

COMMANDS = {
    "christoffel-check": (
        "compare closed-form Christoffel symbols with finite differences at random points",
        METRIC + [
            Param("points", int, 20, "number of random points", _positive, "must be > 0"),
            Param("seed", int, 0, "random seed"),
            Param("step", float, 1e-4, "finite-difference step", _positive, "must be > 0"),
            Param("tol", float, 1e-6, "pass threshold on the relative error", _positive, "must be > 0"),
        ],
    ),
    "integrate": (
        "integrate a geodesic with the reduced spatial equation",
        METRIC + TOLERANCES + [
            Param("point", _floats, (0.0, 6.0, np.pi / 2, 0.0), "start point t,x1,x2,x3 (radians for angles)",
                  lambda v: len(v) == 4, "needs 4 comma-separated values"),
            Param("velocity", _floats, (0.0, 0.0, 0.05), "spatial velocity x1',x2',x3'",
                  lambda v: len(v) == 3, "needs 3 comma-separated values"),
            Param("tprime", float, 1.0, "initial dt/ds"),
            Param("s_end", float, 10.0, "final affine parameter"),
            Param("region", str, "none", "require the start point in none, Ma, MaEps or RadialCut",
                  lambda v: v in ("none", "Ma", "MaEps", "RadialCut"), "must be none, Ma, MaEps or RadialCut"),
            Param("eps", float, 0.0, "eps for MaEps", _nonneg, "must be >= 0"),
            Param("nu", float, 0.0, "nu for RadialCut", _nonneg, "must be >= 0"),
        ],
    ),
    "convexity": (
        "boundary Hessian witness showing M^a_eps is not space convex",
        [
            Param("m", float, 1.0, "mass", _positive, "must be > 0"),
            Param("a", float, 0.0, "rotation parameter, a^2 <= m^2"),
            Param("eps", float, 1.0, "boundary level eps", _positive, "must be > 0"),
        ],
    ),
    "connect": (
        "find a Schwarzschild geodesic joining two points",
        [
            Param("m", float, 1.0, "mass", _positive, "must be > 0"),
            Param("p0", _floats, None, "first point t,r,theta,phi", lambda v: len(v) == 4,
                  "needs 4 comma-separated values"),
            Param("p1", _floats, None, "second point t,r,theta,phi", lambda v: len(v) == 4,
                  "needs 4 comma-separated values"),
            Param("tol", float, 1e-4, "required re-integration residual", _positive, "must be > 0"),
        ],
    ),
    "nonconnect": (
        "polar-angle bound for Kerr axis endpoints near the horizon cut",
        [
            Param("m", float, 1.0, "mass", _positive, "must be > 0"),
            Param("a", float, 0.5, "rotation parameter"),
            Param("nu", float, 0.01, "cut r > r_+ + nu (r > nu if a^2 > m^2)", _positive, "must be > 0"),
            Param("r0", float, None, "first endpoint radius (default: cut + nu)"),
            Param("r1", float, None, "second endpoint radius (default: r0)"),
        ],
    ),
    "lemma1": (
        "integrals of 1/sqrt(p) with a simple root as the slope S varies",
        [
            Param("s_min", float, 1e-4, "smallest slope", _positive, "must be > 0"),
            Param("s_max", float, 1e4, "largest slope", _positive, "must be > 0"),
            Param("n", int, 9, "number of log-spaced slopes", lambda v: v >= 2, "must be >= 2"),
            Param("left", float, 0.0, "left end (root of p)"),
            Param("right", float, 1.0, "right end", None),
            Param("M", float, 1.0, "quadratic coefficient", _positive, "must be > 0"),
        ],
    ),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stationary-geodesics",
        description="Geodesics, convexity and connectedness checks for stationary spacetimes.",
        epilog=f"Exit codes: 0 ok, 1 mathematical failure, 2 usage error. "
               f"Default output directory: ${OUTPUT_ENV}.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (doc, params) in COMMANDS.items():
        p = sub.add_parser(name, help=doc, description=doc)
        p.add_argument("--config", help="JSON file with parameter values (flags override it)")
        p.add_argument("--output", help="output file, '-' for stdout")
        p.add_argument("--format", choices=("json", "csv"), default=None, help="report format (default json)")
        for prm in params:
            p.add_argument("--" + prm.name.replace("_", "-"), dest=prm.name, default=None,
                           help=f"{prm.help} (default: {prm.default})")
    return parser


def parse_config(argv) -> dict:
    """Merge defaults, the optional config file and flags into one parameter dict.

    Raises :class:`UsageError` naming the offending key.
    """
    parser = build_parser()
    ns = parser.parse_args(argv)
    params = COMMANDS[ns.command][1]
    known = {p.name: p for p in params}
    file_values = {}
    if ns.config:
        try:
            with open(ns.config) as fh:
                file_values = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"config: cannot read {ns.config!r}: {exc}") from None
        if not isinstance(file_values, dict):
            raise UsageError("config: top level must be an object")
        file_values = {k.replace("-", "_"): v for k, v in file_values.items()}
        if file_values.pop("command", ns.command) != ns.command:
            raise UsageError("command: config file is for a different command")
        for key in ("output", "format"):
            if key in file_values and getattr(ns, key) is None:
                setattr(ns, key, file_values[key])
            file_values.pop(key, None)
        unknown = sorted(set(file_values) - set(known))
        if unknown:
            raise UsageError(f"{unknown[0]}: unknown key for {ns.command}")
    cfg = {"command": ns.command, "output": ns.output, "format": ns.format or "json"}
    if cfg["format"] not in ("json", "csv"):
        raise UsageError("format: must be json or csv")
    for prm in params:
        raw = getattr(ns, prm.name)
        if raw is None:
            raw = file_values.get(prm.name, prm.default)
        if raw is None:
            cfg[prm.name] = None
            continue
        try:
            value = prm.convert(raw)
        except (TypeError, ValueError):
            raise UsageError(f"{prm.name}: cannot parse {raw!r}") from None
        if isinstance(value, float) and not np.isfinite(value):
            raise UsageError(f"{prm.name}: must be finite")
        if prm.check is not None and not prm.check(value):
            raise UsageError(f"{prm.name}: {prm.requirement} (got {raw!r})")
        cfg[prm.name] = value
    return cfg


def _metric(cfg):
    name = cfg["metric"]
    if name == "kerr":
        params = KerrParams(cfg["m"], cfg["a"])
        return kerr_metric(params), params
    if name == "schwarzschild":
        params = KerrParams(cfg["m"], 0.0)
        return kerr_metric(params), params
    return builtin_metric(name), None


def _echo(cfg):
    return {k: v for k, v in cfg.items() if k not in ("command", "output", "format")}


def run_christoffel_check(cfg) -> Report:
    metric, kerr = _metric(cfg)
    rng = np.random.default_rng(cfg["seed"])
    rows = []
    for i in range(cfg["points"]):
        if kerr is not None:
            x = np.array([rng.uniform(3.0, 10.0) * kerr.m, rng.uniform(0.3, np.pi - 0.3), rng.uniform(0, 2 * np.pi)])
        else:
            x = rng.uniform(-2.0, 2.0, metric.dim)
        err = relative_error(christoffel_closed_form(metric, x), fd_christoffel(metric, x, cfg["step"]))
        rows.append([i, *x.tolist(), err])
    worst = max(r[-1] for r in rows)
    names = metric.coordinate_names
    return Report(
        "christoffel-check", _echo(cfg),
        {"max_relative_error": worst, "passed": worst <= cfg["tol"]},
        ["index", *names, "relative_error"], rows, "ok" if worst <= cfg["tol"] else "failed",
    )


def run_integrate(cfg) -> Report:
    metric, kerr = _metric(cfg)
    point = cfg["point"]
    if cfg["region"] != "none":
        if kerr is None:
            raise UsageError("region: only available for kerr and schwarzschild metrics")
        spec = RegionSpec(cfg["region"], cfg["eps"], cfg["nu"])
        if not region_membership(kerr, spec, BLPoint(*point)):
            raise UsageError(f"point: {point} is outside region {cfg['region']}")
    x0 = np.array(point[1:])
    if not metric.in_domain(x0):
        raise UsageError(f"point: {point} is outside the stationary domain of the metric")
    state, E = state_from_velocity(metric, x0, cfg["velocity"], cfg["tprime"], t=point[0])
    icfg = IntegratorConfig(cfg["rel_tol"], cfg["abs_tol"], cfg["max_step"])
    tr = integrate_geodesic(metric, state, E, icfg, cfg["s_end"])
    results = {
        "trajectory_status": tr.status,
        "message": tr.message,
        "steps": len(tr),
        "E": E,
        "q": tr.q0,
        "E_drift": tr.E_drift,
        "q_drift": tr.q_drift,
        "final_s": float(tr.s[-1]),
    }
    if kerr is not None:
        ints = fit_kerr_integrals(kerr, state)
        res = [np.max(np.abs(kerr_first_integral_residuals(kerr, ints, tr.state(i)))) for i in range(len(tr))]
        results["kerr_integrals"] = {"E": ints.E, "L": ints.L, "q": ints.q, "K": ints.K}
        results["max_first_integral_residual"] = float(max(res))
    return Report("integrate", _echo(cfg), results, tr.columns, tr.rows(),
                  "ok" if tr.status == "completed" else "domain_exit")


def run_convexity(cfg) -> Report:
    params = KerrParams(cfg["m"], cfg["a"])
    if params.is_fast:
        raise UsageError("a: convexity witness needs a^2 <= m^2")
    p, v, hess = space_convexity_witness(params, cfg["eps"])
    closed = witness_closed_form(params, cfg["eps"])
    return Report(
        "convexity", _echo(cfg),
        {
            "point": {"t": p.t, "r": p.r, "theta": p.theta, "phi": p.phi},
            "vector": {"t": v.t_part, "r": v.v_part[0], "theta": v.v_part[1], "phi": v.v_part[2]},
            "hessian": hess,
            "closed_form": closed,
            "space_convex": hess <= 0,
        },
        ["r", "theta", "hessian", "closed_form"], [[p.r, p.theta, hess, closed]],
    )


def run_connect(cfg) -> Report:
    if cfg["p0"] is None or cfg["p1"] is None:
        raise UsageError("p0: both p0 and p1 are required")
    m = cfg["m"]
    p0, p1 = BLPoint(*cfg["p0"]), BLPoint(*cfg["p1"])
    for key, p in (("p0", p0), ("p1", p1)):
        if not p.r > 2 * m:
            raise UsageError(f"{key}: r must exceed 2m = {2 * m}")
        if not 0 <= p.theta <= np.pi:
            raise UsageError(f"{key}: theta must lie in [0, pi]")
    equatorial = abs(p0.theta - np.pi / 2) < 1e-12 and abs(p1.theta - np.pi / 2) < 1e-12
    ep = Endpoints(p0, p1) if equatorial else equatorial_reduction(p0, p1)
    sol = solve_connection(m, ep, tol=cfg["tol"])
    prob, ver = sol.problem, sol.verification
    results = {
        "rotated_to_equator": not equatorial,
        "ecase": prob.ecase,
        "E": prob.E,
        "r_star": prob.r_star,
        "S": prob.S,
        "q": prob.q,
        "L2": prob.L2,
        "k": prob.k,
        "swapped": sol.canonical.swapped,
        "time_sign": sol.canonical.time_sign,
        "delta_t": sol.delta_t,
        "delta_phi": sol.delta_phi,
        "endpoint_residual": ver.endpoint_residual,
        "residual_components": ver.residual_components,
        "duality_residuals": {"delta_t": ver.duality_residuals[0], "delta_phi": ver.duality_residuals[1]},
        "affine_length": ver.affine_length,
    }
    rows = [[c.r_star, c.S, c.delta_t, c.delta_phi] for c in sol.curve]
    return Report("connect", _echo(cfg), results, ["r_star", "S", "delta_t", "delta_phi"], rows)


def run_nonconnect(cfg) -> Report:
    params = KerrParams(cfg["m"], cfg["a"])
    nu = cfg["nu"]
    if params.a == 0:
        cert = nonconnect_certificate(params, nu, float("nan"), float("nan"))
    else:
        floor = nu if params.is_fast else params.r_plus + nu
        r0 = cfg["r0"] if cfg["r0"] is not None else floor + nu
        r1 = cfg["r1"] if cfg["r1"] is not None else r0
        if not min(r0, r1) > floor:
            raise UsageError(f"r0: endpoints must exceed the cut {floor}")
        cert = nonconnect_certificate(params, nu, r0, r1)
    verdict = {"not-applicable": "NotApplicable", "non-connectable": "NonConnectable",
               "inconclusive": "Inconclusive"}[cert.verdict]
    results = {
        "verdict": verdict,
        "bound": cert.bound,
        "argmax_r_star": cert.argmax_r_star,
        "cut": cert.floor,
        "r0": cert.r0,
        "r1": cert.r1,
        "fast": params.is_fast,
    }
    columns = ["verdict", "bound", "argmax_r_star", "cut", "r0", "r1"]
    return Report("nonconnect", _echo(cfg), results, columns, [[results[c] for c in columns]],
                  status="not_applicable" if params.a == 0 else "ok")


def run_lemma1(cfg) -> Report:
    if not cfg["right"] > cfg["left"]:
        raise UsageError("right: must exceed left")
    if not cfg["s_max"] > cfg["s_min"]:
        raise UsageError("s_max: must exceed s_min")
    S = np.logspace(np.log10(cfg["s_min"]), np.log10(cfg["s_max"]), cfg["n"])
    table = lemma1_limits(S, cfg["left"], cfg["right"], cfg["M"])
    return Report("lemma1", _echo(cfg), table.verdicts, list(table.columns), table.rows())


RUNNERS = {
    "christoffel-check": run_christoffel_check,
    "integrate": run_integrate,
    "convexity": run_convexity,
    "connect": run_connect,
    "nonconnect": run_nonconnect,
    "lemma1": run_lemma1,
}


def _destination(cfg) -> Optional[Path]:
    out = cfg.get("output")
    if out == "-":
        return None
    if out:
        return Path(out)
    base = os.environ.get(OUTPUT_ENV)
    if base:
        return Path(base) / f"{cfg['command']}.{cfg['format']}"
    return None


def _write(dest: Optional[Path], data: bytes):
    if dest is None:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
        return
    dest.parent.mkdir(parents=True, exist_ok=True)
    dest.write_bytes(data)


def run_experiment(cfg: dict) -> int:
    """Run a parsed configuration, write its report and return the exit code."""
    dest = _destination(cfg)
    try:
        report = RUNNERS[cfg["command"]](cfg)
    except UsageError:
        raise
    except GeodesicsError as exc:
        diag = Report(cfg["command"], _echo(cfg), {"error": type(exc).__name__, "message": str(exc)},
                      status="failure")
        _write(dest, emit_report(diag, "json", __version__))
        return 1
    _write(dest, emit_report(report, cfg["format"], __version__))
    return 0 if report.status == "ok" else 1


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
        return run_experiment(cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
