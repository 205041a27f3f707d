from __future__ import annotations

import json

import pytest

from _util import example_graph, example_move
from luequiv import cli
from luequiv.errors import ClassAlphaUnresolved
from luequiv.graph import Graph, apply_rlc, to_graph6


@pytest.fixture
def files(tmp_path):
    g = example_graph()
    h = apply_rlc(g, example_move())
    a, b = tmp_path / "example.g6", tmp_path / "example_moved.g6"
    a.write_text(to_graph6(g) + "\n")
    b.write_text(to_graph6(h) + "\n")
    return tmp_path, str(a), str(b)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_lu_example(files, capsys):
    tmp, a, b = files
    wpath = str(tmp / "w.json")
    code, out, _ = run(capsys, "check", "--mode", "lu", a, b, "--witness", wpath)
    assert code == 0
    doc = json.loads(out)
    assert doc["equivalent"]
    rlcs = [op for op in doc["witness"]["ops"] if op["op"] == "rlc"]
    assert len(rlcs) == 1 and rlcs[0]["r"] == 2
    code, out, _ = run(capsys, "verify", a, wpath, b)
    assert code == 0 and json.loads(out)["valid"]
    code, out, _ = run(capsys, "apply", a, wpath)
    assert code == 0 and json.loads(out)["graph6"] == open(b).read().strip()


def test_check_lc_same_graph(files, capsys):
    _, a, _ = files
    code, out, _ = run(capsys, "check", "--mode", "lc", a, a)
    assert code == 0 and json.loads(out)["witness"]["ops"] == []


def test_not_equivalent_exit_one(capsys):
    star = to_graph6(Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)]))
    path = to_graph6(Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)]))
    for mode in ("lc", "lcr", "lu"):
        code, out, _ = run(capsys, "check", "--mode", mode, star, path)
        assert code == 1 and not json.loads(out)["equivalent"]


def test_usage_and_parse_errors(capsys):
    code, _, err = run(capsys, "check", "--mode", "lu", "not graph6!", "A_")
    assert code == 2 and err
    code, _, err = run(capsys, "frobnicate")
    assert code == 2
    disconnected = to_graph6(Graph.from_edges(4, [(0, 1), (2, 3)]))
    code, _, err = run(capsys, "check", "--mode", "lu", disconnected, disconnected)
    assert code == 2 and "connected" in err
    code, out, _ = run(capsys, "check", "--mode", "lc", disconnected, disconnected)
    assert code == 0


def test_resource_exit_three(capsys):
    code, _, err = run(capsys, "search-gk", "--k", "7")
    assert code == 3 and "2^64" in err
    code, _, _ = run(capsys, "orbit", to_graph6(Graph.empty(13)))
    assert code == 3


def test_class_alpha_exit_four(capsys, monkeypatch):
    def boom(*a, **k):
        raise ClassAlphaUnresolved("synthetic")

    monkeypatch.setattr(cli, "solve_constrained", boom)
    k2 = to_graph6(Graph.from_edges(2, [(0, 1)]))
    code, _, err = run(capsys, "check", "--mode", "lc", k2, k2)
    assert code == 4 and "CLASS_ALPHA_UNRESOLVED" in err


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "19")
    doc = json.loads(out)
    assert code == 0 and doc["max_useful_level"] == 2
    assert doc["table"][1]["min_genuine_support"] == 11


def test_other_commands(files, capsys, tmp_path):
    _, a, b = files
    code, out, _ = run(capsys, "mls-cover", a)
    assert code == 0 and json.loads(out)["sets"]
    code, out, _ = run(capsys, "standard-form", a, b)
    assert code == 0 and json.loads(out)["standard_form"]
    code, out, _ = run(capsys, "orbit", a, "--level", "2")
    assert code == 0 and json.loads(out)["size"] >= 2
    code, out, _ = run(capsys, "orbit", a, "--allowed", "0,1", "--members")
    assert code == 0 and len(json.loads(out)["members"]) == json.loads(out)["size"]
    ck = str(tmp_path / "ck.json")
    code, out, _ = run(capsys, "search-gk", "--k", "5", "--checkpoint", ck)
    assert code == 0 and json.loads(out)["visited"] == 64
    code, out, _ = run(capsys, "bounds", "--n", "10", "--format", "text")
    assert code == 0 and "max_useful_level: 1" in out


def test_constraints_file(files, capsys, tmp_path):
    _, a, b = files
    cpath = tmp_path / "c.json"
    cpath.write_text(json.dumps([{"coeffs": [f"b_{v}"], "rhs": 0} for v in range(6)]))
    code, out, _ = run(capsys, "check", "--mode", "lc", a, a, "--constraints", str(cpath))
    assert code == 0
    code, out, _ = run(capsys, "check", "--mode", "lc", a, b, "--constraints", str(cpath))
    assert code == 1
