"""Command-line interface: ``nlstar {check,find,trace,interval}``.

Exit codes: 0 success, 2 configuration error, 3 existence condition not
satisfied, 4 numerical failure.
"""
import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from . import continuation as ct
from . import interval as iv
from . import io as nio
from . import stargraph as sg
from .errors import (ConditionFailed, DomainError, DuplicateReducedLength, NoConvergence,
                     NoRoot, RangeEscape, ReducedGraphTooSmall, StepCollapse)

EXIT_OK, EXIT_CONFIG, EXIT_CONDITION, EXIT_NUMERIC = 0, 2, 3, 4

DEFAULTS = {
    "g": None, "graph": None, "nodal": None, "seed": None, "kmax": None, "step": 1e-2,
    "tol": 1e-10, "out": None, "profile_resolution": 0, "force": False,
    "max_samples": 200, "n_cap": None, "direction": None, "seed_norm": 1e-8,
    "M": None, "strategy": "balanced", "ell": 1.0, "n_values": "1,2,3,4",
    "m_grid": None, "norm_grid": None,
}


class ConfigError(Exception):
    pass


# ------------------------------------------------------------ parsing

def parse_g(text):
    if text is None:
        return None
    t = str(text).strip()
    if t in ("+1", "1", "repulsive"):
        return 1
    if t in ("-1", "attractive"):
        return -1
    raise ConfigError(f"--g must be +1 or -1, got {text!r}")


def parse_graph(spec):
    """Lengths (and optionally g) from inline ``l1,l2,...``, JSON text or a JSON file."""
    if spec is None:
        raise ConfigError("no graph given (use --graph)")
    if isinstance(spec, dict):
        return _graph_from_obj(spec)
    if isinstance(spec, (list, tuple)):
        return _graph_from_obj(list(spec))
    text = str(spec).strip()
    if os.path.isfile(text):
        with open(text) as fh:
            try:
                return _graph_from_obj(json.load(fh))
            except json.JSONDecodeError as exc:
                raise ConfigError(f"graph file {text}: {exc}") from None
    if text.startswith(("[", "{")):
        try:
            return _graph_from_obj(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"graph JSON: {exc}") from None
    try:
        lengths = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse edge lengths {text!r}") from None
    return lengths, None


def _graph_from_obj(obj):
    if isinstance(obj, list):
        lengths, g = obj, None
    elif isinstance(obj, dict):
        lengths, g = obj.get("lengths"), obj.get("g")
    else:
        raise ConfigError("graph JSON must be a list of lengths or an object with 'lengths'")
    if not isinstance(lengths, list):
        raise ConfigError("graph 'lengths' must be a list")
    try:
        return [float(x) for x in lengths], (None if g is None else parse_g(g))
    except (TypeError, ValueError):
        raise ConfigError(f"bad edge lengths {lengths!r}") from None


def parse_int_list(text, what):
    if text is None:
        return None
    if isinstance(text, (list, tuple)):
        items = list(text)
    else:
        items = [t for t in str(text).replace("|", ",").split(",") if t.strip()]
    try:
        out = [int(x) for x in items]
    except (TypeError, ValueError):
        raise ConfigError(f"bad {what} {text!r}") from None
    if not out or any(n < 1 for n in out):
        raise ConfigError(f"{what} must be positive integers, got {text!r}")
    return out


def parse_grid(text, what):
    """``start:stop:count`` (inclusive linspace) or a comma list."""
    if text is None:
        return None
    if isinstance(text, (list, tuple)):
        vals = [float(x) for x in text]
    else:
        t = str(text).strip()
        try:
            if ":" in t:
                a, b, n = t.split(":")
                n = int(n)
                if n < 1:
                    raise ConfigError(f"{what}: count must be >= 1")
                vals = list(np.linspace(float(a), float(b), n))
            else:
                vals = [float(x) for x in t.split(",") if x.strip()]
        except ValueError:
            raise ConfigError(f"cannot parse {what} {text!r}") from None
    if not vals:
        raise ConfigError(f"{what} is empty")
    return [float(v) for v in vals]


def build_config(args):
    cfg = dict(DEFAULTS)
    if args.config:
        try:
            with open(args.config) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a JSON object")
        for key, val in loaded.items():
            key = key.replace("-", "_")
            if key not in cfg:
                raise ConfigError(f"unknown config key {key!r}")
            cfg[key] = val
    for key in cfg:
        val = getattr(args, key, None)
        if val is not None and val is not False:
            cfg[key] = val
    tol = float(cfg["tol"])
    if not 1e-14 <= tol <= 1e-6:
        raise ConfigError(f"--tol must lie in [1e-14, 1e-6], got {tol!r}")
    cfg["tol"] = tol
    return cfg


def graph_of(cfg):
    lengths, g_file = parse_graph(cfg["graph"])
    g = parse_g(cfg["g"]) if cfg["g"] is not None else g_file
    if g is None:
        g = 1
    if not lengths:
        raise ConfigError("edge length list is empty")
    nodal = parse_int_list(cfg["nodal"], "nodal vector")
    if nodal is not None and len(nodal) != len(lengths):
        raise ConfigError(f"nodal vector has {len(nodal)} entries for {len(lengths)} edges")
    try:
        order = sorted(range(len(lengths)), key=lambda e: lengths[e])
        graph = sg.StarGraph(tuple(lengths), g)
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    if nodal is not None:
        nodal = [nodal[e] for e in order]
    return graph, nodal


def _out_dir(cfg, default="."):
    out = cfg["out"] or default
    if out is None:
        return None
    os.makedirs(out, exist_ok=True)
    return out


def _echo(cfg):
    return {k: v for k, v in cfg.items() if v is not None}


# ------------------------------------------------------------ commands

def cmd_check(cfg):
    graph, _ = graph_of(cfg)
    try:
        if graph.g == 1:
            report = sg.check_thm1_condition(graph)
        else:
            report = sg.check_thm2_condition(graph)
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    rec = {"command": "check", "lengths": list(graph.lengths), "g": graph.g,
           **report.as_dict()}
    print(f"{report.theorem}: {report.status} ({report.message})")
    for key in ("m_plus", "m_minus", "lhs", "rhs", "admissible_M"):
        if key in report.details:
            print(f"  {key} = {report.details[key]!r}")
    out = _out_dir(cfg, None)
    if out:
        nio.write_json(os.path.join(out, "check.json"), rec)
    return EXIT_OK if report.satisfied else EXIT_CONDITION


def _find(graph, nodal, cfg):
    M = cfg["M"]
    M = None if M is None else int(M)
    force = bool(cfg["force"])
    if nodal is not None:
        return sg.find_central_dirichlet_with_nodal_vector(
            graph, nodal, M=M, strategy=cfg["strategy"], force=force)
    return sg.find_central_dirichlet(graph, M=M, strategy=cfg["strategy"], force=force)


def cmd_find(cfg):
    graph, nodal = graph_of(cfg)
    sol = _find(graph, nodal, cfg)
    out = _out_dir(cfg)
    rec = {"command": "find", **nio.solution_record(sol), "config": _echo(cfg)}
    nio.write_json(os.path.join(out, "solution.json"), rec)
    res = int(cfg["profile_resolution"] or 0)
    if res > 1:
        rows = []
        for e, x, phi in sol.sample(res):
            rows.extend([e, float(xi), float(p)] for xi, p in zip(x, phi))
        nio.write_csv(os.path.join(out, "profile.csv"), ["edge", "x", "phi"], rows)
    print(f"k0 = {sol.k!r}  N = {sol.N!r}  nodal = {sol.nodal}")
    print(f"  flux/k^2 = {rec['residuals']['flux_over_k2']!r}  "
          f"spread/amplitude = {rec['residuals']['spread_over_amplitude']!r}")
    return EXIT_OK


def _seed(graph, nodal, cfg):
    spec = cfg["seed"] or "linear:0"
    if spec.startswith("linear"):
        try:
            index = int(spec.split(":", 1)[1]) if ":" in spec else 0
        except ValueError:
            raise ConfigError(f"bad seed {spec!r}") from None
        if index < 0:
            raise ConfigError("linear seed index must be >= 0")
        return ct.seed_from_linear(graph, index, float(cfg["seed_norm"]), cfg["tol"]), "up"
    if spec == "central-dirichlet":
        sol = _find(graph, nodal, cfg)
        sol.info["seed"] = "central-dirichlet"
        return sol, "both"
    if spec.startswith("file:"):
        path = spec[5:]
        try:
            with open(path) as fh:
                rec = json.load(fh)
            sol = nio.solution_from_record(rec)
        except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
            raise ConfigError(f"cannot load seed {path}: {exc}") from None
        if sol.graph != graph:
            raise ConfigError("seed file graph differs from --graph")
        sol.info["seed"] = spec
        return sol, "both"
    raise ConfigError(f"unknown seed {spec!r}")


def cmd_trace(cfg):
    graph, nodal = graph_of(cfg)
    seed, default_dir = _seed(graph, nodal, cfg)
    direction = cfg["direction"] or default_dir
    kw = {"step": float(cfg["step"]), "tol": cfg["tol"], "max_samples": int(cfg["max_samples"])}
    if cfg["kmax"] is not None:
        kw["kmax"] = float(cfg["kmax"])
    if cfg["n_cap"] is not None:
        kw["n_cap"] = float(cfg["n_cap"])
    warnings = []
    if direction == "both":
        curve = ct.trace_through(graph, seed, **kw)
        warnings.extend(curve.metadata.get("warnings", []))
    elif direction in ("up", "down"):
        try:
            curve = ct.trace_curve(graph, seed, direction=1 if direction == "up" else -1, **kw)
        except StepCollapse as exc:
            curve = exc.curve
            warnings.append(str(exc))
    else:
        raise ConfigError(f"--direction must be up, down or both, got {direction!r}")
    crossings = ct.detect_central_dirichlet_crossings(curve, strict=False)
    curve = ct.with_crossings(curve, crossings)
    curve.metadata["warnings"] = warnings
    out = _out_dir(cfg)
    nio.write_csv(os.path.join(out, "curve.csv"), nio.CURVE_HEADER, nio.curve_rows(curve))
    nio.write_json(os.path.join(out, "curve.json"),
                   {"command": "trace", **nio.curve_record(curve, _echo(cfg)),
                    "seed": nio.solution_record(seed)})
    n_cd = sum(ev.kind == "CENTRAL_DIRICHLET" for ev in curve.events)
    print(f"{len(curve)} samples, k in [{float(curve.k.min())!r}, {float(curve.k.max())!r}], "
          f"N in [{float(curve.N.min())!r}, {float(curve.N.max())!r}], {n_cd} central-Dirichlet event(s)")
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    return EXIT_OK


def cmd_interval(cfg):
    g = parse_g(cfg["g"]) if cfg["g"] is not None else 1
    ell = float(cfg["ell"])
    if not ell > 0.0:
        raise ConfigError(f"--ell must be positive, got {ell!r}")
    ns = parse_int_list(cfg["n_values"], "n values")
    m_grid = parse_grid(cfg["m_grid"], "m grid")
    n_grid = parse_grid(cfg["norm_grid"], "norm grid")
    if m_grid is None and n_grid is None:
        m_grid = list(np.linspace(0.05, 0.95 if g == 1 else 0.45, 19))
    header = ["n", "m", "k", "N", "wavelength", "amplitude", "N_max"]
    rows = []
    try:
        for n in ns:
            nmax = iv.norm_max(n, ell) if g == -1 else math.inf
            pts = []
            if m_grid is not None:
                for m in m_grid:
                    iv.check_m(g, m, allow_zero=False)
                    pts.append(iv.Deformation.from_m(m))
            if n_grid is not None:
                for N in n_grid:
                    pts.append(iv.deformation_of_norm(g, n, ell, N))
            for p in pts:
                k = iv.k_of_m(g, n, ell, p)
                rows.append([n, p.m, k, iv.norm_of_m(g, n, ell, p), iv.wavelength(g, p, k),
                             iv.amplitude(g, p, k), nmax])
    except DomainError as exc:
        raise ConfigError(f"invalid grid: {exc}") from None
    out = _out_dir(cfg)
    nio.write_csv(os.path.join(out, "interval.csv"), header, rows)
    print(f"{len(rows)} rows written to {os.path.join(out, 'interval.csv')}")
    return EXIT_OK


COMMANDS = {"check": cmd_check, "find": cmd_find, "trace": cmd_trace, "interval": cmd_interval}


def make_parser():
    p = argparse.ArgumentParser(prog="nlstar", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"nlstar {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON file with default values for the flags")
        sp.add_argument("--g", help="interaction sign +1 (repulsive) or -1 (attractive)")
        sp.add_argument("--out", help="output directory")
        sp.add_argument("--tol", type=float, help="Kirchhoff tolerance (1e-14 .. 1e-6)")

    def graph_flags(sp):
        sp.add_argument("--graph", help="edge lengths: l1,l2,... or JSON text/file")
        sp.add_argument("--nodal", help="nodal vector n1,n2,... (aligned with --graph)")
        sp.add_argument("--M", type=int, help="attractive case: number of +1 edges")
        sp.add_argument("--strategy", choices=["balanced", "unbalanced"],
                        help="even-E repulsive sign strategy")
        sp.add_argument("--force", action="store_true", default=None,
                        help="skip the existence-condition gate")

    sp = sub.add_parser("check", help="test the existence condition for a graph")
    common(sp)
    sp.add_argument("--graph", help="edge lengths: l1,l2,... or JSON text/file")

    sp = sub.add_parser("find", help="construct a central-Dirichlet solution")
    common(sp)
    graph_flags(sp)
    sp.add_argument("--profile-resolution", dest="profile_resolution", type=int,
                    help="points per edge for profile.csv (0: no profile)")

    sp = sub.add_parser("trace", help="trace a spectral curve")
    common(sp)
    graph_flags(sp)
    sp.add_argument("--seed", help="linear:<index> | central-dirichlet | file:<solution.json>")
    sp.add_argument("--seed-norm", dest="seed_norm", type=float,
                    help="norm of a linear seed (default 1e-8)")
    sp.add_argument("--kmax", type=float, help="stop when k exceeds this value")
    sp.add_argument("--n-cap", dest="n_cap", type=float, help="stop when N exceeds this value")
    sp.add_argument("--step", type=float, help="initial arclength step")
    sp.add_argument("--max-samples", dest="max_samples", type=int, help="samples per direction")
    sp.add_argument("--direction", choices=["up", "down", "both"],
                    help="N-direction to trace from the seed")

    sp = sub.add_parser("interval", help="tables of the interval solution families")
    common(sp)
    sp.add_argument("--ell", type=float, help="interval length (default 1)")
    sp.add_argument("--n-values", dest="n_values", help="nodal domain counts, e.g. 1,2,3,4")
    sp.add_argument("--m-grid", dest="m_grid", help="start:stop:count or m1,m2,...")
    sp.add_argument("--norm-grid", dest="norm_grid", help="start:stop:count or N1,N2,...")
    return p


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConditionFailed as exc:
        print(f"condition not satisfied: {exc}", file=sys.stderr)
        return EXIT_CONDITION
    except (DomainError, DuplicateReducedLength, ReducedGraphTooSmall) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NoRoot, NoConvergence, RangeEscape, StepCollapse) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
