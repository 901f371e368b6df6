"""
Tests for the locdom command-line interface
"""
import sys
import os

# Add parent directory to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import io
import json

import pytest

import cli.cli as cli_module
from cli.cli import main, parse_vertex_set
from core.graph import complete_bipartite, cycle_graph, prism_graph, star_graph
from core.graph_io import read_graph_file, to_graph6
from core.report import check_report


def run(*argv):
    """Run the CLI and decode its report"""
    out = io.StringIO()
    code = main(list(argv), stdout=out)
    text = out.getvalue()
    return code, (json.loads(text) if text else None)


@pytest.fixture
def graph_file(tmp_path):
    """Write a graph as a graph6 file and return its path"""
    def write(g, name="g.g6"):
        path = tmp_path / name
        path.write_text(to_graph6(g).decode("ascii") + "\n")
        return str(path)
    return write


@pytest.fixture
def p4_file(tmp_path):
    """P4 as a graph6 file"""
    path = tmp_path / "p4.g6"
    path.write_text("Ch\n")
    return str(path)


def test_verify_valid(p4_file):
    """Test a valid LD-set"""
    code, report = run("verify", "--graph", p4_file, "--set", "0,2")
    assert code == 0
    assert report["result"]["valid"] is True
    assert report["result"]["verdict"] == "Valid"
    assert report["input"]["n"] == 4
    assert check_report(report) == []


def test_verify_invalid(p4_file, tmp_path):
    """Test an invalid set exits 1 with the failure named"""
    code, report = run("verify", "--graph", p4_file, "--set", "1")
    assert code == 1
    assert report["result"]["verdict"] == "Undominated(3)"
    assert "error" in report["result"]
    assert check_report(report) == []

    set_file = tmp_path / "s.txt"
    set_file.write_text("1 2\n")
    code, report = run("verify", "--graph", p4_file, "--set", "1", "--set-file", str(set_file), "--ltd")
    assert code == 0
    assert report["result"]["mode"] == "ltd"


def test_solve(p4_file):
    """Test the exact solver"""
    code, report = run("solve", "--graph", p4_file)
    assert code == 0
    assert report["result"]["value"] == 2
    assert report["result"]["witness"] == [0, 2]


def test_solve_budget(graph_file):
    """Test an exhausted node budget exits 3 with bounds"""
    code, report = run("solve", "--graph", graph_file(cycle_graph(12)), "--budget-nodes", "1")
    assert code == 3
    assert report["result"]["error_kind"] == "BudgetExceeded"
    assert report["result"]["upper_bound"] == 12
    assert check_report(report) == []


def test_construct(graph_file, tmp_path):
    """Test construction with a DOT rendering of the witness"""
    dot = tmp_path / "prism.dot"
    code, report = run("construct", "--graph", graph_file(prism_graph()), "--out", str(dot))
    assert code == 0
    result = report["result"]
    assert result["size"] <= 3
    assert result["trace"]
    assert "fillcolor" in dot.read_text()


def test_construct_hypothesis_failure(graph_file):
    """Test K3,3 exits 2 naming the failed hypothesis"""
    code, report = run("construct", "--graph", graph_file(complete_bipartite(3, 3)))
    assert code == 2
    assert report["result"]["hypothesis"] == "forbidden-graph"
    assert check_report(report) == []


def test_twins(graph_file):
    """Test the twin report of a star"""
    code, report = run("twins", "--graph", graph_file(star_graph(3)))
    assert code == 0
    result = report["result"]
    assert result["leaves"] == [1, 2, 3]
    assert result["supports"] == [0]
    assert result["twins"]["open_pairs"][0] == [1, 2, 1]
    assert result["classification"] == "outside"


def test_family_with_witness_file(tmp_path):
    """Test a family instance written with its witness"""
    out = tmp_path / "reg.g6"
    code, report = run("family", "--kind", "ClosedReg", "--r", "4", "--k", "1",
                       "--out", str(out), "--emit-witness")
    assert code == 0
    assert report["result"]["claimed"] == 8
    assert report["result"]["verified"] is True
    assert read_graph_file(out).n == 15
    witness = (tmp_path / "reg.g6.witness").read_text().strip().split(",")
    assert len(witness) == 8


def test_family_solve():
    """Test the exact value of a family instance agrees with its claim"""
    code, report = run("family", "--kind", "TightSubcubic", "--k", "1", "--solve")
    assert code == 0
    assert report["result"]["exact"]["value"] == report["result"]["claimed"] == 5
    assert check_report(report) == []


def test_family_bad_parameter():
    """Test an out-of-range parameter is a usage error"""
    code, report = run("family", "--kind", "ClosedReg", "--r", "3")
    assert code == 64
    assert report["result"]["error_kind"] == "BadParameter"


def test_enum(tmp_path):
    """Test enumeration to stdout and to a file"""
    code, report = run("enum", "--n", "6", "--cubic")
    assert code == 0
    assert report["result"]["count"] == 2
    assert len(report["result"]["graphs"]) == 2

    out = tmp_path / "cubic8.g6"
    code, report = run("enum", "--n", "8", "--cubic", "--out", str(out))
    assert report["result"]["count"] == 5
    assert len(out.read_text().splitlines()) == 5


def test_sweep(tmp_path):
    """Test sweeps over an enumeration and over a graph6 file"""
    code, report = run("sweep", "--n", "6", "--cubic", "--records")
    assert code == 0
    assert report["result"]["summary"]["count"] == 2
    assert len(report["result"]["records"]) == 2

    stream = tmp_path / "in.g6"
    stream.write_text("Ch\nDhc\n")
    code, report = run("sweep", "--input", str(stream))
    assert code == 0
    assert report["result"]["summary"]["count"] == 2
    assert "records" not in report["result"]


def test_convert_roundtrip(graph_file, tmp_path):
    """Test graph6 to edge list and back"""
    source = graph_file(prism_graph())
    edges = tmp_path / "prism.edges"
    code, report = run("convert", "--in", source, "--out", str(edges))
    assert code == 0
    assert report["result"]["format"] == "edges"
    back = tmp_path / "back.g6"
    run("convert", "--in", str(edges), "--out", str(back))
    assert read_graph_file(back) == prism_graph()


def test_check_report(p4_file, tmp_path):
    """Test saved reports are validated"""
    out = io.StringIO()
    main(["solve", "--graph", p4_file], stdout=out)
    saved = tmp_path / "report.json"
    saved.write_text(out.getvalue())
    code, report = run("check-report", str(saved))
    assert code == 0
    assert report["result"]["problems"] == []

    broken = tmp_path / "broken.json"
    broken.write_text('{"command": "solve"}')
    code, report = run("check-report", str(broken))
    assert code == 1
    assert report["result"]["problems"]


@pytest.mark.parametrize("argv", [[], ["bogus"], ["solve"], ["verify", "--graph"]])
def test_usage_errors(argv):
    """Test usage errors exit 64 without a report"""
    code, report = run(*argv)
    assert code == 64
    assert report is None


def test_parse_error(tmp_path):
    """Test a malformed graph6 file exits 65"""
    bad = tmp_path / "bad.g6"
    bad.write_text("C\n")
    code, report = run("solve", "--graph", str(bad))
    assert code == 65
    assert check_report(report) == []


def test_missing_file(tmp_path):
    """Test an unreadable input exits with the I/O code"""
    code, report = run("solve", "--graph", str(tmp_path / "missing.g6"))
    assert code == 74
    assert report["result"]["error_kind"] == "FileNotFoundError"
    assert check_report(report) == []


def test_internal_failure_reported(p4_file, monkeypatch):
    """Test a broken internal invariant becomes exit 70 with a report"""
    def broken(g):
        raise RuntimeError("constructed set failed verification")

    monkeypatch.setattr(cli_module, "construct_half_ld", broken)
    code, report = run("construct", "--graph", p4_file)
    assert code == 70
    assert report["result"]["error_kind"] == "RuntimeError"
    assert "failed verification" in report["result"]["error"]
    assert check_report(report) == []


def test_parse_vertex_set():
    """Test vertex set parsing"""
    assert parse_vertex_set("0, 2,3", 4).members() == (0, 2, 3)
    assert parse_vertex_set("", 4).members() == ()
