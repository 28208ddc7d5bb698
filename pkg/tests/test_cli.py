import json
import math

import pytest

from rtcurrency import crafted
from rtcurrency.cli import main


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out), out


def dump(C, tmp_path):
    """Write a finite currency out in the theory and currency file formats."""
    T = C.theory
    theory = {"space": {"kind": "abstract", "labels": list(T.space.labels)},
              "generators": [{"name": g.name, "map": {k: sorted(v) for k, v in g.mapping.items()}}
                             for g in T.generators]}
    spec = lambda V: "omega" if V == T.omega else V.to_json()
    currency = {"elements": [{"spec": spec(K), "val": str(v)} for K, v in zip(C.elements, C.values)],
                "target": [spec(V) for V in C.target]}
    return write(tmp_path, "theory.json", theory), write(tmp_path, "currency.json", currency)


@pytest.fixture
def chain(tmp_path):
    return dump(crafted.fair_wallet(N=2), tmp_path)


def test_abstract_check_passes(capsys, chain):
    T, C = chain
    code, report, _ = run(capsys, "abstract", "check", "--theory", T, "--currency", C)
    assert code == 0 and report["exit_code"] == 0
    assert report["command"] == "abstract check"
    assert len(report["inputs"]) == 64
    assert all(r["verdict"] is True for r in report["results"])


VA = "0:a,1:a,2:a"
VB = "0:b,1:b,2:b"


@pytest.mark.parametrize(
    "op, spec, expected",
    [("cost", VA, 0.5), ("cost", VB, 0), ("yield", VA, 0.5), ("yield", VB, 0), ("cost", "omega", 0)],
)
def test_abstract_cost_yield(capsys, chain, op, spec, expected):
    T, C = chain
    code, report, _ = run(capsys, "abstract", op, "--theory", T, "--currency", C, "--spec", spec)
    assert code == 0 and report["value"] == expected


def test_abstract_unknown_label(capsys, chain):
    T, C = chain
    code, report, _ = run(capsys, "abstract", "cost", "--theory", T, "--currency", C, "--spec", "9:z")
    assert code == 3 and "error" in report


def test_abstract_balance(capsys, chain):
    T, C = chain
    args = ["abstract", "balance", "--theory", T, "--currency", C, "--wallet", "0:a,0:b"]
    code, report, _ = run(capsys, *args, "--from", VA, "--to", VB)
    assert code == 0 and report["value"] == 0.5
    code, report, _ = run(capsys, *args, "--from", VB, "--to", VA)
    assert report["value"] == "unaffordable"
    # with --final the wallet names the final wallet
    code, report, _ = run(capsys, "abstract", "balance", "--theory", T, "--currency", C, "--wallet", "1:a,1:b",
                          "--from", VA, "--to", VB, "--final")
    assert report["value"] == 0.5
    assert main(["abstract", "balance", "--theory", T, "--currency", C, "--wallet", "0:a",
                 "--from", VA, "--to", VB]) == 3


def test_abstract_fairness_and_pathology(capsys, chain):
    T, C = chain
    code, report, _ = run(capsys, "abstract", "fairness", "--theory", T, "--currency", C)
    assert code == 0 and report["classification"] == "fair"
    code, report, _ = run(capsys, "abstract", "pathology", "--theory", T, "--currency", C)
    assert code == 0 and report["value"] == []


def test_abstract_pathology_on_pump(capsys, tmp_path):
    T, C = dump(crafted.money_pump(), tmp_path)
    code, report, _ = run(capsys, "abstract", "pathology", "--theory", T, "--currency", C)
    assert report["value"] and {p["classification"] for p in report["value"]} == {"pathological"}
    code, report, _ = run(capsys, "abstract", "check", "--theory", T, "--currency", C)
    assert code == 1


def test_violation_exits_one(capsys, tmp_path):
    T = write(tmp_path, "t.json", {"space": {"kind": "abstract", "labels": ["a", "b"]}, "generators": []})
    C = write(tmp_path, "c.json", {"elements": [{"spec": ["a"], "val": 1}, {"spec": ["b"], "val": 1}],
                                   "target": []})
    code, report, _ = run(capsys, "abstract", "check", "--theory", T, "--currency", C)
    assert code == 1 and report["exit_code"] == 1
    order = next(r for r in report["results"] if r["name"] == "order")
    assert order["verdict"] is False and order["witnesses"]


def test_indeterminate_exits_two(capsys, tmp_path):
    labels = [str(i) for i in range(6)]
    T = write(tmp_path, "t.json", {"space": {"kind": "abstract", "labels": labels}, "budget": 1,
                                   "generators": [{"name": "s", "map": {str(i): [str(i + 1)] for i in range(5)}}]})
    C = write(tmp_path, "c.json", {"elements": [{"spec": ["0"], "val": 1}], "target": [["5"]]})
    code, report, _ = run(capsys, "abstract", "cost", "--theory", T, "--currency", C, "--spec", "5")
    assert code == 2 and report["indeterminate"]


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        ["unital", "cost", "--dim", "x", "--spec", "s.json"],
        ["abstract", "check", "--theory", "missing.json", "--currency", "missing.json"],
    ],
)
def test_input_errors_exit_three(capsys, argv):
    code = main(argv)
    out = json.loads(capsys.readouterr().out)
    assert code == 3 and out["exit_code"] == 3


def test_malformed_json_reports_line(capsys, tmp_path):
    bad = write(tmp_path, "bad.json", '[\n  [1, 0],\n  [0 0]\n]')
    code = main(["unital", "cost", "--dim", "2", "--spec", bad])
    out = json.loads(capsys.readouterr().out)
    assert code == 3 and "line 3" in out["error"]


def test_output_is_byte_identical(capsys, chain):
    T, C = chain
    argv = ["abstract", "check", "--theory", T, "--currency", C]
    _, _, first = run(capsys, *argv)
    _, _, second = run(capsys, *argv)
    assert first == second


def test_unital_commands(capsys, tmp_path):
    two = write(tmp_path, "two.json", [{"diag": [1, 0]}, {"diag": [0, 1]}])
    code, report, _ = run(capsys, "unital", "cost", "--dim", "2", "--spec", two)
    assert code == 0 and report["value"] == 1.0
    code, report, _ = run(capsys, "unital", "yield", "--dim", "2", "--spec", two)
    assert report["value"] == 0.0
    pure = write(tmp_path, "pure.json", [[[[1, 0], [0, 0]], [[0, 0], [0, 0]]]])
    code, report, _ = run(capsys, "unital", "stage2", "--dim", "2", "--wallet-dim", "4", "--spec", pure)
    assert code == 0
    values = {r["name"]: r["value"] for r in report["results"]}
    assert values == {"cost": 1.0, "yield": 1.0}


def test_unital_rejects_bad_matrix(capsys, tmp_path):
    bad = write(tmp_path, "bad.json", [[[0.5, 0], [1, 0]], [[0, 0], [0.5, 0]]])
    assert main(["unital", "cost", "--dim", "2", "--spec", bad]) == 3
    capsys.readouterr()
    layout = write(tmp_path, "p.json", [{"diag": [1, 0]}])
    assert main(["unital", "stage2", "--dim", "2", "--wallet-dim", "1", "--spec", layout]) == 3


def test_thermal_commands(capsys, tmp_path):
    ground = write(tmp_path, "g.json", {"p": [1, 0], "E": [0, 1]})
    excited = write(tmp_path, "e.json", {"p": [0, 1], "E": [0, 1]})
    code, report, _ = run(capsys, "thermal", "lorenz", "--state", ground)
    assert code == 0
    assert report["value"] == [[0, 0], [1, 1], [pytest.approx(1 + math.exp(-1)), 1]]
    code, report, _ = run(capsys, "thermal", "tmaj", "--state", excited, "--other", ground)
    assert report["value"] is True
    code, report, _ = run(capsys, "thermal", "work-cost", "--state", ground, "--levels", "40", "--spacing", "0.05")
    values = {r["name"]: r["value"] for r in report["results"]}
    assert values["work_cost"] == pytest.approx(0.35)
    other = write(tmp_path, "o.json", {"p": [1, 0], "E": [0, 2]})
    assert main(["thermal", "tmaj", "--state", ground, "--other", other]) == 3


def test_locc_commands(capsys, tmp_path):
    state = write(tmp_path, "s.json", {"schmidt": [0.5, 0.25, 0.25]})
    assert run(capsys, "locc", "cost", "--state", state)[1]["value"] == 2
    assert run(capsys, "locc", "yield", "--state", state)[1]["value"] == 1
    code, report, _ = run(capsys, "locc", "check", "--state", state, "--bell", "3")
    assert code == 0
    bad = write(tmp_path, "b.json", {"amplitudes": [[1, 0], [0, 1]]})
    assert main(["locc", "cost", "--state", bad]) == 3


def test_verify_all_worked_values(capsys):
    code, report, _ = run(capsys, "verify-all", "--suite", "paper")
    assert code == 0 and report["suite"] == "paper"
    assert report["results"] and all(r["verdict"] for r in report["results"])


@pytest.mark.parametrize("seed", ["0", "7"])
def test_verify_all_properties_seeded(capsys, monkeypatch, seed):
    monkeypatch.setenv("RL_SEED", seed)
    code, report, first = run(capsys, "verify-all", "--suite", "properties")
    assert code == 0 and report["seed"] == int(seed)
    _, _, second = run(capsys, "verify-all", "--suite", "properties")
    assert first == second
