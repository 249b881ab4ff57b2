"""Text serialisation of solutions and curves.

JSON records use Python's shortest round-trip float repr and CSV tables
use 17 significant digits; both reload to the identical doubles. Every
file starts with a version stamp and contains no timestamps, so
re-running a command reproduces its output byte for byte.
"""
import csv
import io
import json
import math

import numpy as np

from . import __version__
from . import continuation as ct
from . import stargraph as sg

STAMP = f"nlstar {__version__}"


def _clean(obj):
    # numpy scalars/arrays and non-finite floats into plain JSON values
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_clean(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


def dumps(record):
    return json.dumps({"version": STAMP, **_clean(record)}, indent=2) + "\n"


def write_json(path, record):
    with open(path, "w") as fh:
        fh.write(dumps(record))


def fmt(x):
    return "%.17g" % x


def csv_text(header, rows):
    buf = io.StringIO()
    buf.write(f"# {STAMP}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def write_csv(path, header, rows):
    with open(path, "w") as fh:
        fh.write(csv_text(header, rows))


def read_csv(path):
    """Rows of a CSV written by :func:`write_csv` as dicts of strings."""
    with open(path) as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def _nodal_list(nodal):
    return [None if n == sg.INFINITE else int(n) for n in nodal]


def solution_record(sol):
    """JSON-ready dictionary for a :class:`GraphSolution`."""
    edges = [{"length": ell, "sigma": p.sigma, "m": p.m, "mc": p.mc, "hg": p.hg,
              "n": None if p.n == sg.INFINITE else int(p.n)}
             for p, ell in zip(sol.profiles, sol.graph.lengths)]
    spread, flux, _ = sg.kirchhoff_residuals(sol.graph, sol.k, sol.profiles)
    rec = {"g": sol.g, "k": sol.k, "N": sol.N, "lengths": list(sol.graph.lengths),
           "edges": edges, "nodal": _nodal_list(sol.nodal),
           "centre_value": sol.centre_value, "centre_flux": sol.centre_flux,
           "central_dirichlet": sol.info.get("central_dirichlet", sol.is_central_dirichlet()),
           "residuals": {"continuity_spread": spread, "flux": flux,
                         "flux_over_k2": flux / sol.k ** 2,
                         "spread_over_amplitude": spread / max(sol.max_amplitude(), 1e-300)}}
    info = sol.info
    if "scan" in info:
        rec["bracket"] = info["scan"].get("bracket")
        rec["scan"] = info["scan"]
    for key in ("condition", "sigma", "reduced_lengths", "reduced_order", "pairs",
                "core_k", "core_m", "f_at_ends", "seed", "k_linear"):
        if key in info:
            rec[key] = info[key]
    return rec


def solution_from_record(rec):
    """Rebuild a :class:`GraphSolution` from :func:`solution_record` output."""
    g = int(rec["g"])
    lengths = [float(e["length"]) for e in rec["edges"]]
    graph = sg.StarGraph(tuple(lengths), g)
    if list(graph.lengths) != lengths:
        raise ValueError("edge records are not in ascending length order")
    profs = []
    for e in rec["edges"]:
        m = float(e["m"])
        profs.append(sg.EdgeProfile(int(e["sigma"]), m, e.get("n") or 1,
                                    float(e.get("mc", 1.0 - m)), float(e.get("hg", 0.5 - m))))
    cd = bool(rec.get("central_dirichlet", False))
    return sg.assemble(graph, float(rec["k"]), profs, central_dirichlet=cd or None,
                       exact_centre=cd)


CURVE_HEADER = ["index", "k", "N", "centre_value", "nodal", "event", "jump", "u"]


def curve_rows(curve):
    """CSV rows for a traced curve; crossing rows carry their nodal jumps."""
    marks = {}
    jumps = {}
    for ev in curve.events:
        marks.setdefault(ev.index, []).append(ev.kind)
        if ev.kind == "CENTRAL_DIRICHLET":
            jumps[ev.index] = "|".join("%+d" % j for j in ev.detail["jumps"])
    rows = []
    for i, (s, z) in enumerate(zip(curve.samples, curve.states)):
        us = "|".join(fmt(u) for u in z[:curve.graph.E])
        rows.append([i, float(s.k), float(s.N), float(s.centre_value), str(s.nodal),
                     ";".join(marks.get(i, [])), jumps.get(i, ""), us])
    return rows


def curve_record(curve, config=None):
    return {"graph": {"lengths": list(curve.graph.lengths), "g": curve.graph.g},
            "metadata": curve.metadata,
            "events": [{"index": ev.index, "kind": ev.kind, **ev.detail} for ev in curve.events],
            "samples": len(curve.samples),
            "config": config or {}}


def row_state(row):
    """(u, k) of a curve CSV row, for re-validation.

    The ``u`` column holds the continuation coordinates, one per edge; the
    signed amplitude of edge e is b tanh(u_e) (see
    :func:`nlstar.continuation.signed_amplitudes`).
    """
    u = np.array([float(x) for x in row["u"].split("|")])
    return u, float(row["k"])


def validate_row(graph, row, tol=ct.SAMPLE_TOL):
    u, k = row_state(row)
    sol = ct.solution_from_state(graph, u, k)
    res = ct.residual(graph, k, sol.profiles)
    return res.converged(tol)
