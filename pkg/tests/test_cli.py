import json
import subprocess
import sys

import pytest

from clustervec.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_analyze_cyclic_a3(capsys):
    code, r = run_json(capsys, "analyze", "0 1 -1; -1 0 1; 1 -1 0")
    assert code == 0
    assert r["schema"] == "clustervec.report/1"
    assert r["type"] == "A3" and r["ok"]
    assert r["counts"]["c_pos"] == r["counts"]["v"] == 6
    assert all(r["checks"].values())
    assert all(row["status"] == "RealRoot" and row["tree"] for row in r["roots"])


def test_analyze_text_and_dot(capsys):
    code, out, _ = run(capsys, "analyze", "0 1; -1 0")
    assert code == 0 and "A2" in out
    code, out, _ = run(capsys, "analyze", "0 1; -1 0", "--format", "dot")
    assert code == 0 and "graph" in out


def test_analyze_markov_is_indeterminate(capsys):
    code, r = run_json(capsys, "analyze", "markov")
    assert code == 0
    assert r["type"] == "Indeterminate"
    assert r["enumeration"]["capped"]
    assert r["checks"]["probe_c_in_family"]


def test_analyze_from_file_and_stdin(tmp_path, capsys, monkeypatch):
    p = tmp_path / "b.json"
    p.write_text(json.dumps([[0, 1], [-2, 0]]))
    code, r = run_json(capsys, "analyze", str(p))
    assert code == 0 and r["type"].startswith(("B", "C"))
    import io
    monkeypatch.setattr(sys, "stdin", io.StringIO("0 1\n-1 0\n"))
    code, r = run_json(capsys, "analyze", "-")
    assert code == 0 and r["type"] == "A2"


@pytest.mark.parametrize("bad", ["0 1; 1 0", "0 1 2; -1 0", "x y; z w", "0 3; -3 0 extra"])
def test_bad_input_exit_2(capsys, bad):
    code, _, err = run(capsys, "analyze", bad)
    assert code == 2 and err.startswith("error:")


def test_cap_exceeded_exit_2(capsys):
    code, _, err = run(capsys, "enumerate", "markov", "--cap", "100")
    assert code == 2 and "probe" in err


def test_verify_a4(capsys):
    code, r = run_json(capsys, "verify", "A", "4")
    assert code == 0 and r["ok"]
    assert r["members"] == len(r["results"]) and r["expected_count"] == 10


def test_verify_sampled(capsys):
    code, r = run_json(capsys, "verify", "D5", "--sample", "3", "--seed", "4")
    assert code == 0 and len(r["results"]) == 3
    assert any(x["bipartite"] for x in r["results"])


def test_enumerate_and_class(capsys):
    code, r = run_json(capsys, "enumerate", "0 1 -1; -1 0 1; 1 -1 0")
    assert r["schema"] == "clustervec.enumeration/1" and len(r["c_pos"]) == 6
    code, r = run_json(capsys, "enumerate", "0 1 -1; -1 0 1; 1 -1 0", "--class")
    assert r["schema"] == "clustervec.class/1" and r["size"] == 4 and r["complete"]


@pytest.mark.parametrize("label,count", [("A3", 3), ("A5", 5), ("D4", 6)])
def test_templates(capsys, label, count):
    code, r = run_json(capsys, "templates", label)
    assert code == 0 and r["count"] == count


def test_templates_written(capsys, tmp_path):
    code, _, out = run(capsys, "templates", "B", "3", "--out", str(tmp_path))
    assert code == 0
    obj = json.loads((tmp_path / "templates_B3.json").read_text())
    assert obj["schema"] == "clustervec.templates/1"


def test_fold_d4(capsys):
    code, r = run_json(capsys, "fold", "0 -1 0 0; 1 0 -1 -1; 0 1 0 0; 0 1 0 0",
                       "--sigma", "(34)", "--verify", "--roots")
    assert code == 0 and r["ok"] and r["folded_v_matches"]
    assert r["folded"] == [[0, -1, 0], [1, 0, -1], [0, 2, 0]]
    assert r["folded_initial_c"] == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_fold_not_admissible(capsys):
    code, _, err = run(capsys, "fold", "0 1 -1; -1 0 1; 1 -1 0", "--sigma", "(12)")
    assert code == 2


def test_surface(capsys):
    code, r = run_json(capsys, "surface", "D4", "--cross-check", "--sample", "2")
    assert code == 0 and r["arcs"] == 16 and len(r["triangulations"]) == 50
    assert r["cross_check"]["ok"]
    code, out, _ = run(capsys, "surface", "A2", "--format", "dot")
    assert out.count("--") == 5


def test_probe(capsys):
    code, r = run_json(capsys, "probe", "affine-a2", "--depth", "5")
    assert code == 0 and r["schema"] == "clustervec.probe/1"
    assert r["family"]["ok"]


def test_output_file(capsys, tmp_path):
    dest = tmp_path / "r.json"
    code, out, _ = run(capsys, "analyze", "0 1; -1 0", "--format", "json", "-o", str(dest))
    assert code == 0 and json.loads(dest.read_text())["type"] == "A2"


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "clustervec", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and "0.1.0" in r.stdout
