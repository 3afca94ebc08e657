"""Command-line front end.

Exit codes: 0 success, 1 numerical failure, 2 usage error or excluded
parameter.  Options may also come from a JSON file given with ``--config``
(keys are the long option names with dashes replaced by underscores);
explicit flags win over the file.
"""

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import io
from .curve import GraphCurve, PlanarCurve
from .energies import (
    closed_flux_identity,
    cylinder_willmore_energy,
    elastic_energy,
    graph_potential_energy,
    tangential_closure_check,
    weighted_area_energy,
)
from .errors import NumericalError, ParameterError
from .families import (
    ElasticParams,
    Exp,
    Log,
    Power,
    SingularParams,
    StationaryParams,
    WillmoreParams,
    as_kind,
    elastic_to_singular,
    params_from_record,
    params_to_record,
    singular_to_elastic,
    singular_to_stationary,
    stationary_to_elastic,
    willmore_to_elastic,
)
from .residuals import (
    elastic_el_residual,
    fit_eta,
    fit_sigma,
    fit_sigma_log,
    singular_el_residual,
    stationary_el_residual,
    willmore_cyl_residual,
)
from .rng import Lcg64
from .solvers import (
    InitialData,
    StepControl,
    first_integral_report,
    solve_elastic,
    solve_singular,
    solve_stationary,
    solve_stationary_graph_bvp,
)
from .stability import minimizer_compare, stability_report
from .verify import verify_theorems

BUILTIN = {
    "h": 1e-3, "rtol": 1e-10, "atol": 1e-12, "mode": "fixed", "seed": 0,
    "x0": 0.0, "z0": 1.0, "theta0": 0.0, "kappa0": None, "kappa0p": 0.0, "smax": 1.0,
    "alpha": None, "varpi": 0.0, "eta": None, "m": None, "lam": 0.0,
    "p": None, "mu": 0.0, "sigma": 0.0, "n": 1, "varsigma": 0.0, "kind": "power",
    "fit": "none", "tests": 20, "cases": 20, "samples": 2001,
}


class UsageError(Exception):
    pass


# ----------------------------------------------------------------------------
# Parser
# ----------------------------------------------------------------------------


def _shared(p):
    g = p.add_argument_group("shared")
    g.add_argument("--out", help="output path (default: stdout)")
    g.add_argument("--config", help="JSON file with option values")
    g.add_argument("--seed", type=int)
    g.add_argument("--h", type=float, help="step / grid spacing")
    g.add_argument("--rtol", type=float)
    g.add_argument("--atol", type=float)


def _family_params(p):
    g = p.add_argument_group("parameters")
    g.add_argument("--params", help="JSON parameter record with a family or kind tag")
    g.add_argument("--alpha", type=float)
    g.add_argument("--varpi", type=float)
    g.add_argument("--eta", type=float)
    g.add_argument("--m", type=float)
    g.add_argument("--lambda", dest="lam", type=float)
    g.add_argument("--p", type=float)
    g.add_argument("--mu", type=float)
    g.add_argument("--sigma", type=float)
    g.add_argument("--n", type=int)
    g.add_argument("--varsigma", type=float)
    g.add_argument("--kind", choices=["power", "exp", "log"], help="Lagrangian for --family elastic")


def build_parser():
    parser = argparse.ArgumentParser(prog="cylcrit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="integrate a generating curve or solve a graph BVP")
    _shared(p)
    _family_params(p)
    p.add_argument("--family", required=True,
                   choices=["singular", "stationary", "elastic", "stationary-graph"])
    for name in ("x0", "z0", "theta0", "kappa0", "kappa0p", "smax"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--mode", choices=["fixed", "adaptive"])
    p.add_argument("--interval", type=float, nargs=2, metavar=("X0", "X1"))
    p.add_argument("--heights", type=float, nargs=2, metavar=("F0", "F1"))
    p.add_argument("--slope-guess", type=float)
    p.add_argument("--svg", help="also write an SVG polyline")

    p = sub.add_parser("residual", help="Euler-Lagrange residual of a sampled curve")
    _shared(p)
    _family_params(p)
    p.add_argument("--family", required=True, choices=["elastic", "singular", "stationary", "willmore"])
    p.add_argument("--fit", choices=["sigma", "eta", "none"])
    p.add_argument("--curve", required=True, help="curve or graph CSV")
    p.add_argument("--values", action="store_true", help="include per-sample residuals")

    p = sub.add_parser("map", help="map parameters between families")
    _shared(p)
    _family_params(p)
    p.add_argument("--from", dest="src", required=True, choices=["singular", "stationary", "willmore", "elastic"])
    p.add_argument("--to", dest="dst", required=True, choices=["elastic", "stationary", "singular"])

    p = sub.add_parser("energy", help="evaluate a functional on a curve or graph")
    _shared(p)
    _family_params(p)
    p.add_argument("--functional", required=True, choices=["elastic", "willmore", "weighted", "potential"])
    p.add_argument("--curve", required=True, help="curve or graph CSV")

    p = sub.add_parser("stability", help="Jacobi operator report for a stationary graph")
    _shared(p)
    _family_params(p)
    p.add_argument("--graph", help="graph CSV (otherwise solve the BVP from --interval/--heights)")
    p.add_argument("--interval", type=float, nargs=2, metavar=("X0", "X1"))
    p.add_argument("--heights", type=float, nargs=2, metavar=("F0", "F1"))
    p.add_argument("--slope-guess", type=float)
    p.add_argument("--tests", type=int, help="random test functions for the form gap")

    p = sub.add_parser("minimize-check", help="compare a stationary graph with a competitor")
    _shared(p)
    _family_params(p)
    p.add_argument("--graph", required=True)
    p.add_argument("--competitor", required=True)

    p = sub.add_parser("flux-check", help="flux identity and closure integrals on a closed curve")
    _shared(p)
    _family_params(p)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--curve")
    src.add_argument("--circle", type=float, nargs=3, metavar=("CX", "CZ", "R"),
                     help="clockwise circle fixture (outward normal)")
    p.add_argument("--samples", type=int)

    p = sub.add_parser("verify", help="randomized round trips between the families")
    _shared(p)
    p.add_argument("--cases", type=int)
    p.add_argument("--smax", type=float)
    p.add_argument("--no-minus-one", action="store_true", help="never draw the exponent -1")
    return parser


# ----------------------------------------------------------------------------
# Option resolution
# ----------------------------------------------------------------------------


class Options:
    """Flags, then ``--config`` values, then built-in defaults."""

    def __init__(self, ns):
        self.ns = ns
        self.cfg = io.read_json(ns.config) if getattr(ns, "config", None) else {}
        if not isinstance(self.cfg, dict):
            raise UsageError("--config must hold a JSON object")
        if "lambda" in self.cfg:
            self.cfg.setdefault("lam", self.cfg["lambda"])

    def get(self, name, default=None):
        val = getattr(self.ns, name, None)
        if val is not None and val is not False:
            return val
        if name in self.cfg:
            return self.cfg[name]
        return BUILTIN.get(name, default) if default is None else default

    def require(self, name, flag=None):
        val = self.get(name)
        if val is None:
            raise UsageError(f"missing --{flag or name}")
        return val


def _fl(x):
    return None if x is None else float(x)


def _singular(o):
    return SingularParams(float(o.require("alpha")), float(o.get("varpi")))


def _stationary(o, eta_required=True):
    eta = o.require("eta") if eta_required else o.get("eta")
    return StationaryParams(_fl(eta), float(o.require("m")), float(o.get("lam")))


def _willmore(o):
    return WillmoreParams(int(o.get("n")), float(o.require("p")), float(o.get("mu")), float(o.get("varsigma")))


def _elastic_kind(o):
    kind = o.get("kind")
    if kind == "exp":
        return Exp(float(o.require("mu")))
    if kind == "log":
        return Log(float(o.get("lam")), float(o.get("sigma")))
    return Power(float(o.require("p")), float(o.get("mu")), float(o.get("sigma")))


def _record_params(o):
    path = o.get("params")
    return params_from_record(io.read_json(path)) if path else None


def _control(o):
    return StepControl(mode=o.get("mode"), h=float(o.get("h")), rtol=float(o.get("rtol")), atol=float(o.get("atol")))


def _emit(o, obj, compact=False):
    io.write_json(obj, o.get("out"), compact=compact)


# ----------------------------------------------------------------------------
# Subcommands
# ----------------------------------------------------------------------------


def cmd_solve(o):
    family = o.ns.family
    out = o.get("out")
    if out is None:
        raise UsageError("solve needs --out for the CSV")
    control = _control(o)
    if family == "stationary-graph":
        st = _stationary(o)
        interval, heights = o.require("interval"), o.require("heights")
        g = solve_stationary_graph_bvp(st, interval, heights, h=control.h, slope_guess=o.get("slope_guess"))
        io.write_graph_csv(out, g)
        fi = None if st.m == -1 else asdict(first_integral_report(st, g))
        sidecar = {"params": params_to_record(st), "boundary": {"interval": list(interval), "heights": list(heights)},
                   "control": control.as_dict(), "first_integral": fi}
        xs, zs = g.x, g.f
    else:
        init = InitialData(float(o.get("x0")), float(o.get("z0")), float(o.get("theta0")),
                           _fl(o.get("kappa0")), float(o.get("kappa0p")))
        smax = float(o.get("smax"))
        fi = None
        if family == "singular":
            params = _singular(o)
            curve = solve_singular(params, init, smax, control)
        elif family == "stationary":
            params = _stationary(o)
            curve = solve_stationary(params, init, smax, control)
            if params.m != -1:
                fi = asdict(first_integral_report(params, curve))
        else:
            params = ElasticParams(float(o.require("p")), float(o.get("mu")), float(o.get("sigma")))
            curve = solve_elastic(params, init, smax, control)
        io.write_curve_csv(out, curve)
        sidecar = {"params": params_to_record(params), "init": asdict(init),
                   "control": control.as_dict(), "first_integral": fi}
        xs, zs = curve.x, curve.z
    io.write_json(sidecar, Path(out).with_suffix(".json"))
    if o.get("svg"):
        io.write_svg(o.get("svg"), xs, zs)
    return 0


def _residual_params(o, family):
    rec = _record_params(o)
    if rec is not None:
        return rec
    if family == "singular":
        return _singular(o)
    if family == "stationary":
        return _stationary(o, eta_required=o.get("fit") != "eta")
    if family == "willmore":
        return _willmore(o)
    return _elastic_kind(o)


def cmd_residual(o):
    family, fit = o.ns.family, o.get("fit")
    curve = io.read_any_csv(o.ns.curve)
    params = _residual_params(o, family)
    h = o.ns.h if o.ns.h is not None else o.cfg.get("h")
    if fit == "eta":
        if family != "stationary":
            raise UsageError("--fit eta applies to --family stationary")
        _, rep = fit_eta(curve, params.m, params.lam)
    elif fit == "sigma":
        if family not in ("elastic", "willmore"):
            raise UsageError("--fit sigma applies to --family elastic or willmore")
        kind = as_kind(willmore_to_elastic(params) if family == "willmore" else params)
        if isinstance(kind, Power):
            _, rep = fit_sigma(_planar(curve), kind.p, kind.mu, h)
        elif isinstance(kind, Log):
            _, rep = fit_sigma_log(_planar(curve), kind.lam, h)
        else:
            raise UsageError("the exponential Lagrangian has no length multiplier to fit")
    elif family == "singular":
        rep = singular_el_residual(curve, params)
    elif family == "stationary":
        rep = stationary_el_residual(curve, params)
    elif family == "willmore":
        rep = willmore_cyl_residual(_planar(curve), params, h)
    else:
        rep = elastic_el_residual(_planar(curve), params, h)
    out = rep.as_dict(include_values=o.ns.values)
    out["family"] = family
    out["params"] = params_to_record(params)
    _emit(o, out)
    return 0


def _planar(curve):
    return curve.to_planar() if isinstance(curve, GraphCurve) else curve


def _bare(rec):
    rec = dict(rec)
    rec.pop("family", None)
    return rec


def cmd_map(o):
    src, dst = o.ns.src, o.ns.dst
    rec = _record_params(o)
    if src == "singular":
        sp = rec or _singular(o)
        if dst == "elastic":
            res = singular_to_elastic(sp)
        elif dst == "stationary":
            res = singular_to_stationary(sp)
        else:
            raise UsageError("singular maps to elastic or stationary")
    elif src == "stationary":
        st = rec or _stationary(o, eta_required=False)
        if dst != "elastic":
            raise UsageError("stationary maps to elastic")
        res = stationary_to_elastic(st, float(o.get("sigma")))
    elif src == "willmore":
        if dst != "elastic":
            raise UsageError("willmore maps to elastic")
        res = willmore_to_elastic(rec or _willmore(o))
    else:
        if dst != "singular":
            raise UsageError("elastic maps to singular")
        ep = rec or ElasticParams(float(o.require("p")), float(o.get("mu")), float(o.get("sigma")))
        res = elastic_to_singular(ep)
    _emit(o, _bare(params_to_record(res)), compact=True)
    return 0


def cmd_energy(o):
    functional = o.ns.functional
    data = io.read_any_csv(o.ns.curve)
    rec = _record_params(o)
    h = o.ns.h if o.ns.h is not None else o.cfg.get("h")
    if functional in ("weighted", "potential"):
        if not isinstance(data, GraphCurve):
            raise UsageError(f"--functional {functional} needs a graph CSV (x,f,fp)")
        if functional == "weighted":
            ev = weighted_area_energy(data, rec or _singular(o))
        else:
            ev = graph_potential_energy(data, rec or _stationary(o))
    else:
        curve = _planar(data)
        if functional == "willmore":
            ev = cylinder_willmore_energy(curve, rec or _willmore(o), h)
        else:
            ev = elastic_energy(curve, rec or _elastic_kind(o), h)
    _emit(o, {"functional": functional, **ev.as_dict()})
    return 0


def cmd_stability(o):
    rec = _record_params(o)
    st = rec or _stationary(o)
    if o.get("graph"):
        g = io.read_graph_csv(o.get("graph"))
    else:
        g = solve_stationary_graph_bvp(st, o.require("interval"), o.require("heights"),
                                       h=float(o.get("h")), slope_guess=o.get("slope_guess"))
    report = stability_report(g, st, Lcg64(int(o.get("seed"))), n_tests=int(o.get("tests")))
    _emit(o, report.as_dict())
    return 0


def cmd_minimize_check(o):
    rec = _record_params(o)
    st = rec or _stationary(o)
    f = io.read_graph_csv(o.ns.graph)
    g = io.read_graph_csv(o.ns.competitor)
    res = minimizer_compare(f, st, g)
    _emit(o, res.as_dict())
    return 0 if res.ok else 1


def clockwise_circle(cx, cz, r, samples):
    """Circle traversed clockwise, so the curve normal points outward."""
    t = np.linspace(0.0, 2.0 * np.pi, int(samples))
    return PlanarCurve(s=r * t, x=cx + r * np.cos(t), z=cz - r * np.sin(t),
                       theta=-t - np.pi / 2.0, kappa=np.full_like(t, -1.0 / r))


def cmd_flux_check(o):
    if o.get("circle"):
        curve = clockwise_circle(*o.get("circle"), o.get("samples"))
    else:
        curve = io.read_curve_csv(o.get("curve"))
    eta, m = float(o.require("eta")), float(o.require("m"))
    h = o.ns.h if o.ns.h is not None else o.cfg.get("h")
    flux = closed_flux_identity(curve, eta, m, h)
    t1, t2 = tangential_closure_check(curve, h)
    _emit(o, {"lhs": flux.lhs, "rhs": flux.rhs, "gap": flux.gap,
              "tangential": {"int_nu": t1, "int_kappa_nu": t2}})
    return 0


def cmd_verify(o):
    cfg = {}
    if o.ns.seed is not None or "seed" in o.cfg:
        cfg["seed"] = int(o.get("seed"))
    for key, name in (("cases", "cases"), ("h", "h"), ("s_max", "smax")):
        val = getattr(o.ns, name, None)
        if val is None:
            val = o.cfg.get(name, o.cfg.get(key))
        if val is not None:
            cfg[key] = val
    if o.get("no_minus_one"):
        cfg["allow_minus_one"] = False
    report = verify_theorems(cfg)
    _emit(o, report)
    return 0 if report["passed"] else 1


COMMANDS = {
    "solve": cmd_solve,
    "residual": cmd_residual,
    "map": cmd_map,
    "energy": cmd_energy,
    "stability": cmd_stability,
    "minimize-check": cmd_minimize_check,
    "flux-check": cmd_flux_check,
    "verify": cmd_verify,
}


def run(argv=None):
    """Parse ``argv`` and execute; returns the exit code instead of raising."""
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return COMMANDS[ns.command](Options(ns))
    except (UsageError, ParameterError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"cylcrit {ns.command}: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"cylcrit {ns.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
