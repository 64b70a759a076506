import json
import subprocess
import sys

import pytest

from raagkit.cli import CommandResult, run
from raagkit.graphs import SimpleGraph, load_graph, named_graph, path_graph


def payload(argv):
    result = run(argv)
    assert result.exit_code == 0, result.text()
    return result.payload


def test_embed_dpf_example():
    assert payload(["embed", "dpf", "--factors", "2:2,2:2"])["target"] == "F_5 x F_5"
    assert payload(["embed", "fpa", "--factors", "2:2,1:2"])["target"] == "(Z^2)^{*2} * F_7"


def test_day_verify_alias(tmp_path):
    path = tmp_path / "n2.graph"
    path.write_text(named_graph("N2").dumps())
    out = payload(["day", "verify", "--graph", str(path)])
    assert out["instances"] == 300 and out["failures"] == 0


def test_obstruct_example(tmp_path):
    p3, n2 = tmp_path / "p3.graph", tmp_path / "n2.graph"
    p3.write_text(named_graph("P3").dumps())
    n2.write_text(named_graph("N2").dumps())
    result = run(["obstruct", "--source", str(p3), "--target", str(n2)])
    assert result.status == "blocked" and result.exit_code == 0
    assert result.payload["blocked"].startswith("vertex-count")
    assert run(["obstruct", "P3", "P3"]).status == "ok"


def test_analysis_outcomes_exit_zero():
    infeasible = run(["shifts", "solve", "--graph", "P3", "--residues", "2"])
    assert infeasible.status == "infeasible" and infeasible.exit_code == 0


@pytest.mark.parametrize("argv", [
    ["graph", "show", "--graph", "no-such-graph"],
    ["subgroup", "rs", "--graph", "N3", "--residues", "9", "--bound", "64"],
    ["word", "nf", "--graph", "P3", "--word", "a z"],
])
def test_errors_exit_two(argv):
    result = run(argv)
    assert result.status == "error" and result.exit_code == 2


def test_unknown_subcommand_exits_nonzero():
    proc = subprocess.run([sys.executable, "-m", "raagkit.cli", "frobnicate"],
                          capture_output=True, text=True)
    assert proc.returncode != 0


def test_json_output_parses():
    proc = subprocess.run([sys.executable, "-m", "raagkit.cli", "--json", "torsion", "bounds",
                           "--graph", "C4", "--p", "2"], capture_output=True, text=True)
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["status"] == "ok" and doc["payload"]["command"] == "torsion bounds"


def test_graph_round_trip(tmp_path):
    for name in ("P3", "C4", "N2"):
        text = payload(["graph", "show", "--graph", name])["graph"]
        path = tmp_path / f"{name}.graph"
        path.write_text(text)
        assert load_graph(path) == named_graph(name)
    amalgam = payload(["graph", "amalgam", "--graph", "P3", "--lam", "b", "--d", "2"])["graph"]
    path = tmp_path / "amalgam.graph"
    path.write_text(amalgam)
    assert len(load_graph(path)) == 5


def test_shift_file_round_trip(tmp_path):
    system = payload(["shifts", "solve", "--graph", "C4", "--residues", "3"])["shift_system"]
    path = tmp_path / "c4.shifts"
    path.write_text(json.dumps(system))
    out = payload(["lifts", "verify", "--graph", "C4", "--shifts", str(path)])
    assert out["failures"] == 0


def test_deterministic_output():
    argv = [sys.executable, "-m", "raagkit.cli", "subgroup", "rs", "--graph", "P3",
            "--residues", "2"]
    first = subprocess.run(argv, capture_output=True, text=True).stdout
    second = subprocess.run(argv, capture_output=True, text=True).stdout
    assert first == second and "status: ok" in first


def test_command_result_rendering():
    r = CommandResult("ok", {"xs": [1, {"a": 1}], "d": {"k": [1, 2]}}, ["hello"])
    assert r.text().splitlines() == ["status: ok", "xs:", "  - 1", '  - {"a": 1}', "d:",
                                     "  k: [1, 2]", "note: hello"]
