import json

import pytest

from qctl.cli import run
from qctl.trees import tree, tree_to_json


@pytest.fixture
def files(tmp_path):
    t = tmp_path / "t.json"
    t.write_text(json.dumps(tree_to_json(tree(([], [["p"]])))))
    board = tmp_path / "board.json"
    board.write_text(json.dumps({"tiles": ["a", "b"], "hori": [["a", "b"], ["b", "a"]],
                                 "verti": [["a", "b"], ["b", "a"]], "init": ["a"]}))
    amtp = tmp_path / "amtp.json"
    amtp.write_text(json.dumps({"tiles": ["a"], "hori": [["a", "a"]], "verti": [["a", "a"]], "t0": ["a"],
                                "acc": ["a"], "multi": [["a", "a"]], "n": 2}))
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    return {"tree": str(t), "board": str(board), "amtp": str(amtp), "bad": str(bad)}


def test_check(files, capsys):
    assert run(["check", "--tree", files["tree"], "--formula", "EX p", "--mode", "strict"]) == 0
    assert capsys.readouterr().out.strip() == "true"
    assert run(["check", "--tree", files["tree"], "--formula", "AX ~p"]) == 1
    assert capsys.readouterr().out.strip() == "false"


def test_check_json_witness(files, capsys):
    assert run(["check", "--tree", files["tree"], "--formula", "exists q. EX (q & p)", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["verdict"] is True and doc["witness"] == {"q": [1]}


def test_check_formula_file(files, tmp_path, capsys):
    f = tmp_path / "f.txt"
    f.write_text("EX p")
    assert run(["check", "--tree", files["tree"], "--formula-file", str(f), "--backend", "exhaustive"]) == 0


def test_errors_exit_2(files, capsys):
    assert run(["check", "--tree", files["bad"], "--formula", "p"]) == 2
    assert run(["check", "--tree", "/nonexistent.json", "--formula", "p"]) == 2
    assert run(["check", "--tree", files["tree"], "--formula", "EX ("]) == 2
    assert run(["check", "--tree", files["tree"], "--formula", "p", "--node", "9"]) == 2
    assert run(["nonsense"]) == 2
    assert run(["tile", files["board"]]) == 2
    assert "error" in capsys.readouterr().err


def test_gen_type(capsys):
    assert run(["gen", "type", "--k", "1", "--n", "1"]) == 0
    out = capsys.readouterr().out.strip()
    assert out.startswith("AX true & EX ~p0 & (forall x1. forall y2.")


def test_gen_seed_moves_counters(capsys):
    run(["gen", "bind", "--k", "1", "--seed", "40"])
    assert "q41" in capsys.readouterr().out


def test_gen_missing_parameter(capsys):
    assert run(["gen", "compare", "--k", "1"]) == 2
    assert "--d" in capsys.readouterr().err


def test_sat(capsys):
    assert run(["sat", "EX a & EX ~a", "--max-branching", "1"]) == 1
    assert capsys.readouterr().out.strip() == "unsat"
    assert run(["sat", "EX a & EX ~a", "--max-branching", "2", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["status"] == "sat" and len(doc["witness"]["nodes"]) == 3
    assert run(["sat", "EXEF true & AXAG false", "--finite", "--max-size", "3"]) == 1
    assert "unsat_within_bound" in capsys.readouterr().out


def test_caps_are_named(capsys):
    assert run(["sat", "EX EX a", "--max-branching", "3", "--enum-cap", "5"]) == 2
    assert "--enum-cap" in capsys.readouterr().err
    assert run(["gen", "type", "--k", "5", "--n", "1"]) == 2
    assert "--tetration-cap" in capsys.readouterr().err


def test_translate(capsys):
    assert run(["translate", "EX p", "--to", "exef"]) == 0
    assert capsys.readouterr().out.strip() == "EXEF p"
    assert run(["translate", "EX p", "--to", "infinite-embed"]) == 0
    assert capsys.readouterr().out.startswith("EX (in & p) &")
    assert run(["translate", "EF p", "--to", "ef"]) == 2


def test_tile(files, capsys):
    assert run(["tile", files["board"], "--k", "1"]) == 0
    assert capsys.readouterr().out.split() == ["a", "b", "b", "a"]
    assert run(["tile", files["amtp"], "--amtp", "--json"]) == 0
    assert json.loads(capsys.readouterr().out) == {"verdict": True}
    assert run(["tile", files["board"], "--k", "3"]) == 2
    assert "--search-cap" in capsys.readouterr().err


def test_verify_single_suite(capsys):
    assert run(["verify", "amtp"]) == 0
    assert capsys.readouterr().out.startswith("[PASS] 9.")
    assert run(["verify", "nope"]) == 2
