import json
import math
import subprocess
import sys

import pytest

from nlstar import cli
from nlstar import interval as iv
from nlstar import io as nio
from nlstar import stargraph as sg


def run(tmp_path, *argv):
    return cli.main(list(argv) + ["--out", str(tmp_path)])


def payload(path):
    with open(path) as fh:
        return [ln for ln in fh if not ln.startswith("#")]


# ----------------------------------------------------------------- check

def test_check_odd_repulsive(tmp_path, capsys):
    assert run(tmp_path, "check", "--graph", "1,1.2,1.5") == 0
    rec = json.load(open(tmp_path / "check.json"))
    assert rec["status"] == "SATISFIED"
    assert "SATISFIED" in capsys.readouterr().out


def test_check_even_failing_prints_both_sides(tmp_path, capsys):
    assert run(tmp_path, "check", "--graph", "1,1.2,1.5,2") == 3
    out = capsys.readouterr().out
    assert "lhs =" in out and "rhs =" in out


def test_check_attractive_lists_admissible_M(tmp_path):
    lengths = "0.9,0.909,1.0,1.01,1.02"
    assert run(tmp_path, "check", "--graph", lengths, "--g", "-1") == 0
    rec = json.load(open(tmp_path / "check.json"))
    assert rec["admissible_M"] == [2]


@pytest.mark.parametrize("graph", ["", "1,-2,3", "1,x", "[1, 2"])
def test_check_malformed_graph(tmp_path, graph):
    assert run(tmp_path, "check", "--graph", graph) == 2


def test_graph_from_json_file(tmp_path):
    path = tmp_path / "graph.json"
    path.write_text(json.dumps({"lengths": [1.0, 1.2, 1.5], "g": 1}))
    assert run(tmp_path, "check", "--graph", str(path)) == 0


def test_config_file_and_bad_tolerance(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"graph": "1,1.2,1.5", "g": "+1"}))
    assert run(tmp_path, "check", "--config", str(cfg)) == 0
    cfg.write_text(json.dumps({"graph": "1,1.2,1.5", "bogus": 1}))
    assert run(tmp_path, "check", "--config", str(cfg)) == 2
    assert run(tmp_path, "find", "--graph", "1,1.2,1.5", "--tol", "1e-3") == 2


# ------------------------------------------------------------------ find

def test_find_base_example(tmp_path):
    assert run(tmp_path, "find", "--graph", "1,1.2,1.5", "--profile-resolution", "11") == 0
    rec = json.load(open(tmp_path / "solution.json"))
    assert rec["nodal"] == [1, 1, 1]
    assert rec["k"] > math.pi
    assert abs(rec["residuals"]["flux_over_k2"]) < 1e-10
    assert rec["residuals"]["spread_over_amplitude"] < 1e-10
    assert rec["bracket"] is not None
    rows = nio.read_csv(tmp_path / "profile.csv")
    assert len(rows) == 33
    assert {r["edge"] for r in rows} == {"0", "1", "2"}


def test_find_with_nodal_vector(tmp_path):
    assert run(tmp_path, "find", "--graph", "1,2.4,4.5", "--nodal", "1,2,3") == 0
    rec = json.load(open(tmp_path / "solution.json"))
    assert rec["nodal"] == [1, 2, 3]


def test_find_solution_round_trip(tmp_path):
    assert run(tmp_path, "find", "--graph", "1,1.2,1.5") == 0
    rec = json.load(open(tmp_path / "solution.json"))
    sol = nio.solution_from_record(rec)
    direct = sg.find_central_dirichlet(sg.StarGraph((1.0, 1.2, 1.5), 1))
    assert sol.k == direct.k
    assert sol.ms == direct.ms
    spread, flux, _ = sg.kirchhoff_residuals(sol.graph, sol.k, sol.profiles)
    assert abs(flux) <= 1e-10 * sol.k ** 2


def test_find_condition_failure_writes_nothing(tmp_path):
    assert run(tmp_path, "find", "--graph", "1,1.2,1.5,2") == 3
    assert not (tmp_path / "solution.json").exists()


def test_find_without_root_is_numerical_failure(tmp_path):
    # equal pair without a nodal vector: the root lies at the forbidden end
    assert run(tmp_path, "find", "--graph", "1,1,1.2,1.5,2") == 4


def test_find_mismatched_nodal(tmp_path):
    assert run(tmp_path, "find", "--graph", "1,1.2,1.5", "--nodal", "1,2") == 2
    assert run(tmp_path, "find", "--graph", "1,1.2,1.5", "--nodal", "0,1,1") == 2


# ----------------------------------------------------------------- trace

def test_trace_writes_curve_and_sidecar(tmp_path):
    assert run(tmp_path, "trace", "--graph", "1,1.2,1.5", "--seed", "central-dirichlet",
               "--max-samples", "15") == 0
    rows = nio.read_csv(tmp_path / "curve.csv")
    assert list(rows[0].keys()) == nio.CURVE_HEADER
    events = [r for r in rows if "CENTRAL_DIRICHLET" in r["event"]]
    assert len(events) == 1
    assert events[0]["nodal"] == "1|1|1"
    assert set(events[0]["jump"].split("|")) <= {"+1", "-1", "+0"}
    side = json.load(open(tmp_path / "curve.json"))
    assert any(e["kind"] == "CENTRAL_DIRICHLET" for e in side["events"])
    assert side["samples"] == len(rows)


def test_trace_rows_revalidate(tmp_path):
    assert run(tmp_path, "trace", "--graph", "1,1.4142135623730951,1.7320508075688772",
               "--g", "-1", "--max-samples", "25") == 0
    graph = sg.StarGraph((1.0, math.sqrt(2), math.sqrt(3)), -1)
    for row in nio.read_csv(tmp_path / "curve.csv"):
        assert nio.validate_row(graph, row)


def test_trace_one_edge_matches_closed_form(tmp_path):
    assert run(tmp_path, "trace", "--graph", "1.3", "--max-samples", "60") == 0
    rows = nio.read_csv(tmp_path / "curve.csv")
    err = max(abs(float(r["k"]) - iv.k_of_norm(1, 1, 2.6, 2 * float(r["N"]))) for r in rows)
    assert err < 1e-8


def test_trace_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    argv = ["trace", "--graph", "1,1.2,1.5", "--seed", "central-dirichlet", "--max-samples", "10"]
    assert run(a, *argv) == 0
    assert run(b, *argv) == 0
    assert payload(a / "curve.csv") == payload(b / "curve.csv")
    side = [json.load(open(d / "curve.json")) for d in (a, b)]
    for rec in side:
        rec["config"].pop("out")
    assert side[0] == side[1]


def test_trace_from_solution_file(tmp_path):
    assert run(tmp_path, "find", "--graph", "1,1.2,1.5") == 0
    seed = tmp_path / "solution.json"
    assert run(tmp_path / "t", "trace", "--graph", "1,1.2,1.5", "--seed", f"file:{seed}",
               "--max-samples", "5") == 0
    assert run(tmp_path / "t", "trace", "--graph", "1,1.3,1.5", "--seed", f"file:{seed}") == 2


def test_trace_step_collapse_keeps_partial_curve(tmp_path, monkeypatch, capsys):
    from nlstar import continuation as ct
    orig = ct.trace_curve
    monkeypatch.setattr(ct, "trace_curve", lambda *a, **kw: orig(*a, **{**kw, "collapse": 1.0}))
    assert run(tmp_path, "trace", "--graph", "1,1.2,1.5", "--direction", "up") == 0
    assert len(nio.read_csv(tmp_path / "curve.csv")) == 1
    assert "warning" in capsys.readouterr().err


@pytest.mark.parametrize("seed", ["linear:x", "linear:-1", "bogus", "file:/nonexistent.json"])
def test_trace_bad_seed(tmp_path, seed):
    assert run(tmp_path, "trace", "--graph", "1,1.2,1.5", "--seed", seed) == 2


# -------------------------------------------------------------- interval

def test_interval_rescaling(tmp_path):
    assert run(tmp_path, "interval", "--g", "+1", "--n-values", "1,2,3,4",
               "--m-grid", "0.1:0.9:9") == 0
    rows = nio.read_csv(tmp_path / "interval.csv")
    assert len(rows) == 36
    k1 = {r["m"]: float(r["k"]) for r in rows if r["n"] == "1"}
    for r in rows:
        assert float(r["k"]) == pytest.approx(int(r["n"]) * k1[r["m"]], rel=1e-14)
        assert r["N_max"] == "inf"


def test_interval_attractive_below_max(tmp_path):
    assert run(tmp_path, "interval", "--g", "-1", "--n-values", "1,2",
               "--m-grid", "0.05:0.45:9") == 0
    for r in nio.read_csv(tmp_path / "interval.csv"):
        assert 0.0 < float(r["N"]) < float(r["N_max"])
        assert float(r["m"]) < 0.5


def test_interval_norm_grid(tmp_path):
    assert run(tmp_path, "interval", "--g", "-1", "--n-values", "1", "--norm-grid", "0.5,1") == 0
    rows = nio.read_csv(tmp_path / "interval.csv")
    assert [float(r["N"]) for r in rows] == pytest.approx([0.5, 1.0], rel=1e-14)


@pytest.mark.parametrize("grid", [",", "0:1:0", "a:b:3"])
def test_interval_empty_or_bad_grid(tmp_path, grid):
    assert run(tmp_path, "interval", "--m-grid", grid) == 2


def test_interval_out_of_range_grid(tmp_path):
    assert run(tmp_path, "interval", "--g", "-1", "--m-grid", "0.6") == 2
    assert run(tmp_path, "interval", "--g", "-1", "--norm-grid", "100") == 2


def test_csv_floats_round_trip(tmp_path):
    rows = [[0.1, 1 / 3, math.pi * 1e-300, 2.0 ** 0.5]]
    nio.write_csv(tmp_path / "x.csv", ["a", "b", "c", "d"], rows)
    back = nio.read_csv(tmp_path / "x.csv")[0]
    assert [float(back[c]) for c in "abcd"] == rows[0]


def test_module_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "nlstar", "check", "--graph", "1,1.2,1.5"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    out = subprocess.run([sys.executable, "-m", "nlstar", "--version"],
                         capture_output=True, text=True)
    assert out.stdout.startswith("nlstar ")
