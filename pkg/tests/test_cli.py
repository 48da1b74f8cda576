import importlib
import json

import pytest

from eqbirat.cli import main
from eqbirat.locus import build_example
from eqbirat.serialize import config_to_json, dumps

bl = importlib.import_module("eqbirat.blowup")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, family, kw in [
        ("trigonal_k2", "trigonal_threefold", {"k": 2}),
        ("p2_z2", "p2_linear_z2", {}),
        ("p3_z2", "p3_linear_z2", {}),
    ]:
        path = tmp_path / f"{name}.json"
        path.write_text(dumps(config_to_json(build_example(family, **kw))), encoding="utf-8")
        paths[name] = str(path)
    point = {"group": {"p": 3}, "dim": 3, "points": [{"weights": [1, 1, 2]}]}
    (tmp_path / "point112.json").write_text(json.dumps(point))
    paths["point112"] = str(tmp_path / "point112.json")
    curve = {"group": {"p": 3}, "dim": 3, "curves": [{"genus": 1, "weights": [1, 1], "d": 0, "isogeny_label": "E"}]}
    (tmp_path / "curve.json").write_text(json.dumps(curve))
    paths["curve"] = str(tmp_path / "curve.json")
    paths["dir"] = tmp_path
    return paths


@pytest.mark.parametrize("argv,expected", [
    (["group", "--cyclic", "9", "--n", "2"], "Z^5 ⊕ Z/3"),
    (["group", "--cyclic", "7", "--n", "1"], "Z^6"),
    (["group", "--orders", "2,2", "--n", "1"], "0"),
])
def test_group(capsys, argv, expected):
    code, out, _ = run(capsys, *argv)
    assert code == 0 and out == expected + "\n"


def test_group_json_and_budget(capsys, monkeypatch):
    code, out, _ = run(capsys, "group", "--cyclic", "6", "--n", "2", "--json")
    d = json.loads(out)
    assert code == 0 and d["structure"] == "Z^2 ⊕ Z/2" and d["torsion"] == [2]
    code, _, err = run(capsys, "--budget", "3", "group", "--cyclic", "11", "--n", "3")
    assert code == 1 and "budget" in err
    monkeypatch.setenv("EI_BUDGET", "3")
    code, _, err = run(capsys, "group", "--cyclic", "13", "--n", "3")
    assert code == 1 and "budget" in err


def test_symbol_reduce(capsys):
    # "--" lets a term start with a minus sign
    code, out, _ = run(capsys, "symbol", "reduce", "--cyclic", "3", "--", "1,1", "-1*2,2")
    d = json.loads(out)
    assert code == 0 and d["structure"] == "Z" and d["sum"] == [[1, "[1,1]"], [-1, "[2,2]"]]
    code, out, _ = run(capsys, "symbol", "reduce", "--cyclic", "5", "--", "1,2", "-1*2,1")
    assert json.loads(out)["zero"] is True
    code, _, err = run(capsys, "symbol", "reduce", "--cyclic", "4", "2,2")
    assert code == 1 and err.startswith("eqbirat: error:")


def test_invariant_examples(capsys, files):
    code, out, _ = run(capsys, "invariant", "--kind", "J", files["trigonal_k2"])
    assert code == 0 and out.splitlines()[0] == "J = 6"
    assert out.splitlines()[1].startswith("  +6")
    code, out, _ = run(capsys, "invariant", "--kind", "combined", "--g", "4", files["trigonal_k2"], "--json")
    d = json.loads(out)
    assert d["value"] == -1 and d["kind"] == "combined:4" and len(d["terms"]) == 1
    code, out, _ = run(capsys, "invariant", "--kind", "I", files["p2_z2"])
    assert code == 0 and out.startswith("I = 4\n")
    code, out, _ = run(capsys, "invariant", "--kind", "K", files["p3_z2"])
    assert out.startswith("K = 8\n")


def test_invariant_mismatch(capsys, files):
    code, _, err = run(capsys, "invariant", "--kind", "I", files["trigonal_k2"])
    assert code == 1 and "dim=2, p=2" in err
    code, _, err = run(capsys, "invariant", "--kind", "bogus", files["trigonal_k2"])
    assert code == 1


def test_beta(capsys, files):
    code, out, _ = run(capsys, "beta", files["p2_z2"])
    d = json.loads(out)
    assert code == 0 and "class" in d and "structure" in d
    code, out, _ = run(capsys, "invariant", "--kind", "beta", files["trigonal_k2"])
    assert code == 0 and json.loads(out)["zero"] is True


def test_blowup_point(capsys, files):
    center = json.dumps({"kind": "isolated_fixed_point", "index": 0})
    out_path = files["dir"] / "after.json"
    code, out, _ = run(capsys, "blowup", files["point112"], "--center", center, "--out", str(out_path))
    d = json.loads(out)
    assert code == 0 and d["case"] == "Bl0-b, a=b≠c"
    assert all(v == 0 for v in d["deltas"].values())
    after = json.loads(out_path.read_text())
    assert after["points"] == [{"weights": [2, 2, 2]}]
    assert after["curves"] == [{"genus": 0, "weights": [1, 1], "d": 0}]


def test_blowup_free_orbit_and_curve(capsys, files):
    code, out, _ = run(capsys, "blowup", files["p2_z2"], "--center", '{"kind": "free_orbit_point"}')
    d = json.loads(out)
    assert d["case"] == "Bl0-a" and d["deltas"] == {"I": 0}
    assert len(d["after"]["atoms"]) == 3 + 1
    code, out, _ = run(capsys, "blowup", files["curve"], "--center", '{"kind": "fixed_curve", "index": 0}')
    d = json.loads(out)
    assert d["after"]["surfaces"][0]["k_dot_n"] == 0
    assert all(v == 0 for v in d["deltas"].values())


def test_blowup_errors(capsys, files):
    code, _, err = run(capsys, "blowup", files["point112"], "--center", '{"kind": "fixed_curve", "index": 0}')
    assert code == 1 and "curve" in err
    code, _, err = run(capsys, "blowup", files["point112"], "--center", "{not json")
    assert code == 1
    code, _, _ = run(capsys, "blowup", files["point112"])
    assert code == 1
    code, out, _ = run(capsys, "blowup", files["point112"], "--list")
    assert code == 0 and {"kind": "isolated_fixed_point", "index": 0} in json.loads(out)


def test_fuzz(capsys, files):
    argv = ["fuzz", files["trigonal_k2"], "--steps", "200", "--seed", "3", "--check", "J,combined:4,beta"]
    code, out, _ = run(capsys, *argv)
    d = json.loads(out)
    assert code == 0 and d["ok"] and d["steps_done"] == 200
    assert d["final_values"]["J"] == 6 and d["final_values"]["combined:4"] == -1
    assert sum(d["histogram"].values()) == 200
    code2, out2, _ = run(capsys, *argv)
    assert out2 == out


def test_fuzz_zero_steps(capsys, files):
    code, out, _ = run(capsys, "fuzz", files["trigonal_k2"], "--steps", "0", "--check", "J")
    d = json.loads(out)
    assert code == 0 and d["histogram"] == {}


def test_fuzz_corrupted_rule(capsys, files, monkeypatch):
    good = bl.RULES["fixed_curve"]

    def broken(c, center):
        after, label, sub = good(c, center)
        return after.replace(atoms=c.atoms), label, sub

    monkeypatch.setitem(bl.RULES, "fixed_curve", broken)
    code, out, _ = run(capsys, "fuzz", files["trigonal_k2"], "--steps", "200", "--seed", "0",
                       "--check", "combined:4")
    d = json.loads(out)
    assert code == 1 and not d["ok"]
    assert d["drift"]["case"].startswith("Bl1-1") and d["drift"]["kind"] == "combined:4"


@pytest.mark.parametrize("argv,code,verdict,extra", [
    (["--target", "3,1", "--basis", "1,1", "--basis", "2,1"], 2, "infeasible", None),
    (["--target", "0,0", "--basis", "1,1"], 0, "feasible", [0]),
    (["--target", "5,3", "--basis", "1,1", "--basis", "2,1"], 0, "feasible", [1, 2]),
])
def test_feasible(capsys, argv, code, verdict, extra):
    got, out, _ = run(capsys, "feasible", *argv)
    d = json.loads(out)
    assert got == code and d["verdict"] == verdict
    if extra is not None:
        assert d["witness"] == extra
    else:
        assert d["certificate"]


def test_feasible_errors(capsys):
    assert run(capsys, "feasible", "--target", "1,x", "--basis", "1,1")[0] == 1
    assert run(capsys, "feasible", "--target", "1,1", "--basis", "1")[0] == 1
    assert run(capsys, "feasible", "--target", "1,1")[0] == 1
    assert run(capsys, "feasible", "--target", "1,1", "--basis", "1,1", "--forced", "0")[0] == 1
    assert run(capsys, "nonsense")[0] == 1


def test_obstruct(capsys, tmp_path):
    table = {
        "p": 2,
        "atoms": [
            {"name": "lambda=16", "hodge_poly": {"0": 1}, "rho": 1, "rho_g": 1, "g_action_trivial": True},
            {"name": "lambda=4", "hodge_poly": {"0": 4}, "rho": 4, "rho_g": 2, "g_action_trivial": False},
            {"name": "lambda=0", "hodge_poly": {"-1": 1, "0": 3, "1": 1}, "rho": 5, "rho_g": 3,
             "g_action_trivial": False},
        ],
        "forced": [{"atom": "lambda=0", "hodge_poly": {"-1": 1, "0": 2, "1": 1}, "rho": 2, "rho_g": 2,
                    "g_action_trivial": True}],
    }
    path = tmp_path / "x.json"
    path.write_text(json.dumps(table))
    code, out, _ = run(capsys, "obstruct", str(path))
    d = json.loads(out)
    assert code == 0 and d["obstructed"]
    assert [a["obstructed"] for a in d["atoms"]] == [False, False, True]
    assert d["atoms"][2]["remainder"] == [3, 1]


def test_example_out(capsys, tmp_path):
    target = tmp_path / "t.json"
    code, out, _ = run(capsys, "example", "trigonal_threefold", "--k", "3", "--out", str(target))
    assert code == 0 and out == ""
    d = json.loads(target.read_text())
    assert d["curves"][0]["genus"] == 7 and d["curves"][0]["d"] == 18
    code, out, _ = run(capsys, "example", "p3_linear_z3", "--variant", "two_lines")
    assert len(json.loads(out)["curves"]) == 2
    code, _, err = run(capsys, "example", "p3_linear_z3", "--variant", "nope")
    assert code == 1 and "unknown variant" in err


def test_bad_config_file(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"group": {"p": 4}, "dim": 3}')
    code, _, err = run(capsys, "invariant", "--kind", "J", str(path))
    assert code == 1 and "not prime" in err
    path.write_text("{")
    assert run(capsys, "beta", str(path))[0] == 1
    assert run(capsys, "beta", str(tmp_path / "missing.json"))[0] == 1
