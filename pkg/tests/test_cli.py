import json
import subprocess
import sys

import pytest

from cberlab.cli import main
from cberlab.groups import Z
from cberlab.patterns import Language, Pattern, from_json, to_json


@pytest.fixture(autouse=True)
def in_tmp(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip().startswith(("{", "[")) else out), err


def write(path, data):
    with open(path, "w") as fh:
        json.dump(data, fh)
    return str(path)


def test_list(capsys):
    code, out, _ = run(capsys, "list")
    assert code == 0 and "bijection-recursion" in out
    code, cat, _ = run(capsys, "list", "--json")
    assert {"id", "anchor", "description"} <= set(cat[0])


def test_run_bundled_smoke(capsys, in_tmp):
    code, _, err = run(capsys, "run", "smoke", "--report", "rep.json")
    assert code == 0 and "PASS" in err
    assert json.loads((in_tmp / "rep.json").read_text())["summary"]["status"] == "PASS"


def test_run_failing_config_exit_code(capsys):
    cfg = write("cfg.json", {"experiment": "mass-transport",
                             "params": {"samples": 2000, "tolerance": 0.0}})
    code, report, _ = run(capsys, "run", cfg)
    assert code == 1 and report["summary"]["status"] == "FAIL"


def test_run_errors(capsys):
    code, _, err = run(capsys, "run", "missing.json")
    assert code == 2 and "cannot read" in err
    code, _, err = run(capsys, "run", write("c.json", {"experiment": "warp-drive"}))
    assert code == 2 and "unknown experiment id 'warp-drive'" in err


def test_walk_freq(capsys):
    code, out, _ = run(capsys, "walk", "freq", "--group", "Z", "--target", "3Z",
                       "--steps", "20000", "--walks", "10", "--seed", "7")
    assert code == 0
    assert {"estimate", "se", "verdict"} <= set(out) and out["verdict"] == "PASS"
    assert out["reference"] == "1/3"


def test_ire_max_density_and_verify(capsys, in_tmp):
    code, out, _ = run(capsys, "ire", "max-density", "--problem", "ramsey", "--p", "1/2", "--window", "3")
    assert code == 0 and out["delta_star"] == "3/4"
    path = out["certificate_path"]
    code, out, _ = run(capsys, "ire", "verify", path)
    assert code == 0 and out["verified"]
    data = json.loads((in_tmp / path).read_text())
    data["certificate"]["value"] = "4/5"
    code, out, _ = run(capsys, "ire", "verify", write("bad.json", data))
    assert code == 1 and not out["verified"] and "value" in out["reason"]


def test_ire_feasibility(capsys):
    code, out, _ = run(capsys, "ire", "feasibility", "--problem", "linearization", "--window", "3")
    assert code == 0 and out["kind"] == "feasible"
    code, out, _ = run(capsys, "ire", "verify", out["certificate_path"])
    assert out["verified"]


def test_ire_max_density_other_problem(capsys):
    code, _, err = run(capsys, "ire", "max-density", "--problem", "linearization", "--window", "3")
    assert code == 2 and "ramsey" in err


def test_gallery_verbs(capsys):
    code, out, _ = run(capsys, "gallery", "dyadic", "--check", "successor", "--len", "10")
    assert code == 0 and out["counterexamples"] == 0 and out["checked"] == 1024
    code, out, _ = run(capsys, "gallery", "ramsey-clique", "--n", "16", "--samples", "5", "--seed", "7")
    assert code == 0 and out["samples"] == 5 and 3 <= out["mean"] <= 16
    rule = write("rule.json", {"kind": "builtin", "name": "coordinate-order", "radius": 1})
    code, out, _ = run(capsys, "gallery", "adversary", "--problem", "linearization", "--rule", rule)
    assert code == 0 and out["status"] == "DEFEATED" and out["replayed"]


# -- expand ----------------------------------------------------------------

def test_expand_bijection(capsys):
    W = range(-24, 25)
    P = Pattern(Z, Language.of(A=1, B=1), W,
                {"A": [(x,) for x in W if x % 2 == 0], "B": [(x,) for x in W if x % 2]})
    code, out, err = run(capsys, "expand", "bijection", write("p.json", to_json(P)), "--radius", "8")
    assert code == 0 and "side" in err
    Q = from_json(out["pattern"])
    phi = dict(Q.rel("Phi"))
    assert all(phi[x] == x - 1 for x in range(-8, 9, 2))
    assert out["report"]["gammas_used"][0] == -1


def test_expand_colouring(capsys):
    tm = [bin(i).count("1") % 2 for i in range(40)]
    edges = [(x, x + 1) for x in range(39)]
    P = Pattern(Z, Language.of(E=2, M=1), range(40),
                {"E": edges + [(b, a) for a, b in edges], "M": [(i,) for i in range(40) if tm[i]]})
    code, out, _ = run(capsys, "expand", "colouring", write("p.json", {"pattern": to_json(P)}), "--d", "2")
    assert code == 0
    Q = from_json(out["pattern"])
    colour = {x: i for i in range(3) for (x,) in Q.rel(f"C{i}")}
    assert all(colour[a] != colour[b] for a, b in edges if a in colour and b in colour)
    assert out["report"]["coloured"] == len(colour) > 0


def test_expand_forest(capsys):
    edges = [(0, 1), (1, 2), (2, 3), (3, 0)]
    P = Pattern(Z, Language.of(E=2), range(4), {"E": edges + [(b, a) for a, b in edges]})
    data = {"pattern": to_json(P), "exhaustion": [[[0, 1], [2, 3]], [[0, 1, 2, 3]]]}
    code, out, _ = run(capsys, "expand", "forest", write("p.json", data))
    assert code == 0 and out["report"]["edges"] == 3
    code, _, err = run(capsys, "expand", "forest", write("q.json", {"pattern": to_json(P)}))
    assert code == 2 and "exhaustion" in err


def test_expand_forest_disconnected_class(capsys):
    P = Pattern(Z, Language.of(E=2), range(3), {"E": [(0, 1), (1, 0)]})
    data = {"pattern": to_json(P), "exhaustion": [[[0, 1, 2]]]}
    code, out, _ = run(capsys, "expand", "forest", write("p.json", data))
    assert code == 1 and out["report"]["failures"]


def test_expand_linearize(capsys):
    P = Pattern(Z, Language.of(P=2), range(4), {"P": [(0, 2)]})
    data = {"pattern": to_json(P), "pieces": [[2, 0], [3, 1]]}
    code, _, err = run(capsys, "expand", "linearize", write("bad.json", data))
    assert code == 2 and "piece" in err
    data["pieces"] = [[0, 2], {"order": [3, 1]}]
    code, out, _ = run(capsys, "expand", "linearize", write("p.json", data))
    order = out["report"]["order"]
    assert code == 0 and sorted(order) == [0, 1, 2, 3] and order.index(0) < order.index(2)


def test_expand_tree_order(capsys):
    P = Pattern(Z, Language.of(T=2), range(3), {"T": [(0, 1), (1, 2)]})
    code, out, _ = run(capsys, "expand", "tree-order", write("p.json", to_json(P)))
    assert code == 0 and out["report"]["components"] == [[0, 1, 2]]
    assert len(from_json(out["pattern"]).rel("L")) == 3


def test_expand_zline(capsys):
    order = {"blocks": [{"id": "evens", "kind": "Z"}, {"id": "odds", "kind": "Z"}]}
    code, out, _ = run(capsys, "expand", "zline", write("z.json", {"order": order,
                                                                  "freqs": {"evens": "1/2", "odds": 0.5}}))
    assert code == 0 and out["selection"] == "evens"
    dense = {"blocks": [{"id": "q", "kind": "DENSE"}]}
    code, out, _ = run(capsys, "expand", "zline", write("d.json", {"order": dense, "freqs": {}}))
    assert out["selection"] == "NOT-IN-X"


def test_expand_bad_input(capsys):
    code, _, err = run(capsys, "expand", "colouring", write("x.json", {"hello": 1}))
    assert code == 2 and "Pattern" in err


def test_console_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "cberlab.cli", "gallery", "dyadic", "--len", "6"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["verdict"] == "PASS"
