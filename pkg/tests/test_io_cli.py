import json
from fractions import Fraction

import pytest

from trilie import (
    InputError,
    LinearMap,
    ThreeLieAlgebra,
    check_action,
    check_fundamental_identity,
    check_post_lie,
    check_rb,
    post_lie_from_rb,
)
from trilie import io
from trilie.cli import main

from helpers import nonzero_sc, ex4d_algebra, ex4d_operator


def run(capsys, *argv):
    code = main(list(argv) + ["--json"])
    out = capsys.readouterr().out
    return code, json.loads(out)


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


CORRUPTED = {
    "kind": "algebra", "dim": 4,
    "brackets": [
        {"args": [0, 1, 2], "value": {"3": "1"}},
        {"args": [0, 1, 3], "value": {"2": "1"}},
        {"args": [0, 2, 3], "value": {"0": "1"}},
    ],
}


# ------------------------------------------------------------------ io

def test_rationals_render_reduced():
    assert io.rational(Fraction(4, 6)) == "2/3"
    assert io.rational(Fraction(-3)) == "-3"


def test_algebra_round_trip():
    a = ThreeLieAlgebra(4, {(0, 1, 2): (Fraction(1, 3), 0, -2, 0), (1, 2, 3): (1, 0, 0, 0)})
    back = io.algebra_from_json(json.loads(json.dumps(io.algebra_to_json(a))))
    assert nonzero_sc(back) == nonzero_sc(a)
    assert back.basis_names == a.basis_names


def test_operator_action_and_map_round_trip():
    op = ex4d_operator(Fraction(2, 3))
    back = io.operator_from_json(json.loads(json.dumps(io.operator_to_json(op))))
    assert back.t == op.t and back.lam == op.lam
    assert back.rho.rho == op.rho.rho
    act = io.action_from_json(io.action_to_json(op.action))
    assert nonzero_sc(act.g) == nonzero_sc(op.g)
    m = LinearMap.from_rows([[1, Fraction(-1, 2)], [0, 3]])
    assert io.map_from_json(io.map_to_json(m)) == m


def test_postlie_round_trip():
    p = post_lie_from_rb(ex4d_operator(1))
    back = io.postlie_from_json(json.loads(json.dumps(io.postlie_to_json(p))))
    assert back.tri.rho == p.tri.rho
    assert nonzero_sc(back.lie) == nonzero_sc(p.lie)


def test_schema_errors_are_input_errors():
    with pytest.raises(InputError):
        io.algebra_from_json({"dim": 3, "brackets": [{"args": [2, 1, 0], "value": {"0": "1"}}]})
    with pytest.raises(InputError):
        io.algebra_from_json({"dim": 3, "brackets": [{"args": [0, 1, 2], "value": {"0": "one half"}}]})
    with pytest.raises(InputError):
        io.load("no-such-entry", "algebra")
    with pytest.raises(InputError):
        io.load("paper-ex-4d", "operator")


def test_report_round_trip():
    for a in (ex4d_algebra(), io.algebra_from_json(CORRUPTED)):
        r = check_fundamental_identity(a)
        assert io.report_from_json(json.loads(json.dumps(io.report_to_json(r)))) == r
    bad = check_rb(ex4d_operator(1).with_map(LinearMap.identity(4)))
    assert io.report_from_json(io.report_to_json(bad)) == bad


def test_catalog_entries_all_verify():
    entries = io.catalog_entries()
    kinds = {k for _, k, _ in entries}
    assert {"algebra", "action", "operator", "postlie", "map"} <= kinds
    for name, kind, _ in entries:
        obj = io.load(name, kind)
        if kind == "algebra":
            assert check_fundamental_identity(obj).ok, name
        elif kind == "action":
            assert check_action(obj).ok, name
        elif kind == "operator":
            assert check_rb(obj).ok, name
        elif kind == "postlie":
            assert check_post_lie(obj).ok, name
        else:
            assert isinstance(obj, LinearMap)


def test_catalog_dir_override(tmp_path, monkeypatch, capsys):
    write(tmp_path, "tiny.json", {"kind": "algebra", "description": "abelian plane", "dim": 2, "brackets": []})
    monkeypatch.setenv("TRILIE_CATALOG_DIR", str(tmp_path))
    assert io.catalog_dir() == tmp_path
    assert [n for n, _, _ in io.catalog_entries()] == ["tiny"]
    code, out = run(capsys, "verify", "tiny", "--kind", "algebra")
    assert code == 0 and out["ok"]
    code, _ = run(capsys, "verify", "paper-ex-4d", "--kind", "algebra")
    assert code == 2


# ------------------------------------------------------------------ cli

def test_verify_exit_codes(tmp_path, capsys):
    code, out = run(capsys, "verify", "paper-ex-4d", "--kind", "algebra")
    assert code == 0 and out["report"]["ok"]
    empty = write(tmp_path, "empty.json", {"dim": 3, "brackets": []})
    assert run(capsys, "verify", empty, "--kind", "algebra")[0] == 0
    code, out = run(capsys, "verify", write(tmp_path, "bad.json", CORRUPTED), "--kind", "algebra")
    assert code == 1
    assert len(out["report"]["witness"]) == 5
    assert io.report_from_json(out["report"]) == check_fundamental_identity(io.algebra_from_json(CORRUPTED))
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert run(capsys, "verify", str(broken), "--kind", "algebra")[0] == 2
    assert run(capsys, "verify", "missing-thing", "--kind", "algebra")[0] == 2


def test_verify_other_kinds(capsys):
    assert run(capsys, "verify", "ex4d-adjoint", "--kind", "action")[0] == 0
    assert run(capsys, "verify", "ex4d-projection-w2-3", "--kind", "operator")[0] == 0
    assert run(capsys, "verify", "ex4d-postlie", "--kind", "postlie")[0] == 0


def test_pipeline(tmp_path, capsys):
    for ref in ("ex4d-projection", "zero-operator"):
        code, out = run(capsys, "pipeline", ref)
        assert code == 0
        assert all(s["ok"] for s in out["steps"])
        assert out["steps"][-1]["step"] == "coboundary_matches_twisted_differential"
    bad = write(tmp_path, "bad-op.json", {
        "kind": "operator", "action": "ex4d-adjoint", "lambda": "1",
        "matrix": [["1", "0", "0", "0"], ["0", "1", "0", "0"], ["0", "0", "1", "0"], ["0", "0", "0", "1"]]})
    code, out = run(capsys, "pipeline", bad)
    assert code == 1
    assert [s["step"] for s in out["steps"]] == ["rota_baxter"]


def test_rb_commands(capsys):
    code, out = run(capsys, "rb", "check", "ex4d-projection")
    assert code == 0
    code, out = run(capsys, "rb", "search", "ex4d-adjoint", "--lambda", "1",
                    "--entries=-1,0,1", "--diagonal")
    assert code == 0
    assert [["0", "0", "0", "0"], ["0", "0", "0", "0"], ["0", "0", "1", "0"], ["0", "0", "0", "1"]] in out["operators"]
    assert run(capsys, "rb", "search", "ex4d-adjoint", "--lambda", "1", "--entries", "0,1,2,3")[0] == 2


def test_semidirect_and_postlie_commands(capsys):
    code, out = run(capsys, "semidirect", "ex4d-adjoint", "--lambda", "2/3")
    assert code == 0 and out["algebra"]["dim"] == 8
    code, out = run(capsys, "postlie", "ex4d-projection")
    assert code == 0 and out["ok"]


def test_mc_commands(capsys):
    assert run(capsys, "mc", "check", "ex4d-projection")[0] == 0
    code, out = run(capsys, "mc", "twisted-check", "ex4d-projection", "ex4d-projection-nontrivial-deformation")
    shifted = LinearMap.from_rows([[0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    expected = check_rb(ex4d_operator(1).with_map(shifted)).ok
    assert out["maurer_cartan"] == expected
    assert code == (0 if expected else 1)


def test_cohomology_and_deform_commands(capsys):
    code, out = run(capsys, "cohomology", "dims", "ex4d-projection", "--degree", "2")
    assert code == 0 and (out["Z"], out["B"], out["H"]) == (12, 2, 10)
    assert run(capsys, "cohomology", "dims", "ex4d-projection", "--degree", "9")[0] == 2
    code, out = run(capsys, "deform", "classify", "ex4d-projection", "ex4d-projection-trivial-deformation")
    assert code == 0 and out["cohomology_class_trivial"]
    assert {tuple(w["pair"]): w["value"] for w in out["witness_x"]} == {(1, 2): "1", (1, 3): "2"}
    code, out = run(capsys, "deform", "classify", "ex4d-projection", "ex4d-projection-nontrivial-deformation")
    assert code == 0 and out["is_cocycle"] and not out["cohomology_class_trivial"]
    code, out = run(capsys, "deform", "classify", "ex4d-projection", "ex4d-projection-non-deformation")
    assert code == 1 and not out["is_cocycle"]


def test_catalog_commands(capsys):
    code, out = run(capsys, "catalog", "list")
    assert code == 0 and "paper-ex-4d" in {e["name"] for e in out["entries"]}
    code, out = run(capsys, "catalog", "show", "paper-ex-4d")
    assert code == 0 and out["entry"]["dim"] == 4
    assert run(capsys, "catalog", "show", "nope")[0] == 2


def test_human_readable_output(capsys):
    assert main(["verify", "paper-ex-4d", "--kind", "algebra"]) == 0
    assert "pass" in capsys.readouterr().out
    assert main(["verify", "nope", "--kind", "algebra"]) == 2
    assert "input error" in capsys.readouterr().err
