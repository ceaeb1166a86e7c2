"""Command-line front end.

Exit status: 0 when every requested check passes, 1 when a check fails
(the report carries the failing basis tuple), 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import io
from .actions import check_action, semidirect_product
from .algebra import VerificationReport, check_fundamental_identity
from .cohomology import (
    classify_deformation,
    coboundary_matches_twisted,
    cohomology_dims,
)
from .errors import ComplexError, InputError
from .linalg import as_fraction
from .linfty import TableCochain, cochain_space_dim, mc_check, mc_twisted_check
from .post_lie import check_post_lie, identity_is_rb, left_action, post_lie_from_rb, subadjacent
from .rota_baxter import (
    check_rb,
    check_rb_via_graph,
    check_rb_via_nijenhuis,
    descendent_algebra,
    search_rb,
)

PASS, FAIL, BAD_INPUT = 0, 1, 2


class Outcome:
    def __init__(self, status: int, payload: dict, lines: list):
        self.status, self.payload, self.lines = status, payload, lines


def _report_lines(r: VerificationReport) -> list:
    if r.ok:
        return [f"{r.check}: pass"]
    out = [f"{r.check}: FAIL at basis tuple {r.witness}"]
    for side, val in (("lhs", r.lhs), ("rhs", r.rhs)):
        if val is not None:
            out.append(f"  {side} = {json.dumps(io._jsonable(val))}")
    if r.detail:
        out.append(f"  {r.detail}")
    return out


def _report_outcome(command: str, r: VerificationReport, **extra) -> Outcome:
    payload = {"command": command, "ok": r.ok, "report": io.report_to_json(r)}
    payload.update(extra)
    return Outcome(PASS if r.ok else FAIL, payload, _report_lines(r))


def cmd_verify(args) -> Outcome:
    obj = io.load(args.ref, args.kind)
    if args.kind == "algebra":
        r = check_fundamental_identity(obj)
    elif args.kind == "action":
        for which, alg in (("g", obj.g), ("h", obj.h)):
            fi = check_fundamental_identity(alg)
            if not fi.ok:
                raise InputError(f"{which} fails the Fundamental Identity at {fi.witness}")
        r = check_action(obj)
    elif args.kind == "operator":
        obj.action.require_valid()
        r = check_rb(obj)
    else:
        r = check_post_lie(obj)
    return _report_outcome("verify", r, kind=args.kind)


def cmd_semidirect(args) -> Outcome:
    a = io.load(args.action, "action")
    s = semidirect_product(a, as_fraction(args.lam))
    doc = io.algebra_to_json(s)
    return Outcome(PASS, {"command": "semidirect", "ok": True, "algebra": doc}, [json.dumps(doc, indent=2)])


def cmd_rb_check(args) -> Outcome:
    op = io.load(args.operator, "operator")
    op.action.require_valid()
    r = check_rb(op)
    graph, nij = check_rb_via_graph(op), check_rb_via_nijenhuis(op)
    out = _report_outcome("rb check", r, graph=graph, nijenhuis=nij)
    out.lines += [f"graph is a subalgebra: {graph}", f"lifted map is Nijenhuis: {nij}"]
    return out


def _parse_entries(text: str) -> list:
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise InputError("--entries needs at least one value")
    return [as_fraction(p) for p in parts]


def cmd_rb_search(args) -> Outcome:
    a = io.load(args.action, "action")
    found = search_rb(a, as_fraction(args.lam), _parse_entries(args.entries), args.diagonal)
    mats = [io.map_to_json(op.t)["matrix"] for op in found]
    lines = [f"{len(found)} operator(s)"] + [json.dumps(m) for m in mats]
    return Outcome(PASS, {"command": "rb search", "ok": True, "count": len(found), "operators": mats}, lines)


def _steps_outcome(command: str, steps: list, extra: dict = None) -> Outcome:
    ok = all(s["ok"] for s in steps)
    payload = {"command": command, "ok": ok, "steps": steps}
    payload.update(extra or {})
    lines = [f"{s['step']}: {'pass' if s['ok'] else 'FAIL'}" + (f" ({s['detail']})" if s.get("detail") else "")
             for s in steps]
    return Outcome(PASS if ok else FAIL, payload, lines)


def _postlie_steps(op) -> tuple:
    p = post_lie_from_rb(op)
    rep = check_post_lie(p)
    steps = [{"step": "post_lie_axioms", "ok": rep.ok,
              "detail": "" if rep.ok else f"{rep.check} at {rep.witness}"}]
    if rep.ok:
        steps.append({"step": "subadjacent_equals_descendent", "ok": subadjacent(p) == descendent_algebra(op)})
        la = left_action(p).report
        steps.append({"step": "left_action", "ok": la.ok, "detail": "" if la.ok else f"{la.check} at {la.witness}"})
        steps.append({"step": "identity_is_rota_baxter", "ok": identity_is_rb(p)})
    return p, steps


def cmd_postlie(args) -> Outcome:
    op = io.load(args.operator, "operator")
    op.require_valid()
    p, steps = _postlie_steps(op)
    out = _steps_outcome("postlie", steps, {"postlie": io.postlie_to_json(p)})
    return out


def cmd_mc_check(args) -> Outcome:
    op = io.load(args.operator, "operator")
    op.action.require_valid()
    mc, rb = mc_check(op), check_rb(op).ok
    if mc != rb:
        raise ComplexError("Maurer-Cartan verdict disagrees with the Rota-Baxter identity")
    return Outcome(PASS if mc else FAIL, {"command": "mc check", "ok": mc, "maurer_cartan": mc},
                   [f"Maurer-Cartan element: {mc}"])


def cmd_mc_twisted(args) -> Outcome:
    op = io.load(args.operator, "operator")
    op.require_valid()
    tp = io.load(args.map, "map")
    if (tp.source_dim, tp.target_dim) != (op.t.source_dim, op.t.target_dim):
        raise InputError("perturbation must have the shape of the operator")
    mc = mc_twisted_check(op, tp)
    rb = check_rb(op.with_map(op.t + tp)).ok
    if mc != rb:
        raise ComplexError("twisted Maurer-Cartan verdict disagrees with the Rota-Baxter identity for T + T'")
    return Outcome(PASS if mc else FAIL, {"command": "mc twisted-check", "ok": mc, "maurer_cartan": mc},
                   [f"twisted Maurer-Cartan element (T + T' is Rota-Baxter): {mc}"])


def cmd_cohomology_dims(args) -> Outcome:
    op = io.load(args.operator, "operator")
    z, b, h = cohomology_dims(op, args.degree)
    return Outcome(PASS, {"command": "cohomology dims", "ok": True, "degree": args.degree, "Z": z, "B": b, "H": h},
                   [f"degree {args.degree}: dim Z = {z}, dim B = {b}, dim H = {h}"])


def cmd_deform_classify(args) -> Outcome:
    op = io.load(args.operator, "operator")
    t = io.load(args.map, "map")
    v = classify_deformation(op, t)
    payload = {
        "command": "deform classify",
        "ok": v.is_cocycle,
        "is_cocycle": v.is_cocycle,
        "cohomology_class_trivial": v.cohomology_class_trivial,
        "witness_x": io.wedge_to_json(v.witness_x) if v.witness_x is not None else None,
        "homomorphism_conditions": v.homomorphism_conditions,
    }
    lines = [f"cocycle: {v.is_cocycle}", f"trivial class: {v.cohomology_class_trivial}"]
    if v.witness_x is not None:
        terms = " + ".join(f"{io.rational(c)} e{a + 1}^e{b + 1}" for (a, b), c in sorted(v.witness_x.items()))
        lines.append(f"witness X = {terms or '0'}")
        bad = [k for k, ok in v.homomorphism_conditions.items() if not ok]
        if bad:
            lines.append("note: first-order homomorphism conditions not met: " + ", ".join(bad))
    return Outcome(PASS if v.is_cocycle else FAIL, payload, lines)


def _sample_cochain(rng: random.Random, n: int, op) -> TableCochain:
    dim = cochain_space_dim(op.h.dim, op.g.dim, n - 1)
    coords = [rng.choice((-2, -1, 1, 2, Fraction(1, 2))) if rng.random() < 0.25 else 0 for _ in range(dim)]
    return TableCochain.from_vector(n - 1, op.h.dim, op.g.dim, coords)


def cmd_pipeline(args) -> Outcome:
    op = io.load(args.operator, "operator")
    op.action.require_valid()
    steps = []

    def add(name, ok, detail=""):
        steps.append({"step": name, "ok": bool(ok), "detail": detail})
        return ok

    r = check_rb(op)
    if not add("rota_baxter", r.ok, "" if r.ok else f"fails at h-basis triple {r.witness}"):
        return _steps_outcome("pipeline", steps)
    chain = [
        ("graph_subalgebra", lambda: check_rb_via_graph(op)),
        ("nijenhuis_lift", lambda: check_rb_via_nijenhuis(op)),
        ("descendent_fundamental_identity", lambda: check_fundamental_identity(descendent_algebra(op)).ok),
    ]
    for name, fn in chain:
        if not add(name, fn()):
            return _steps_outcome("pipeline", steps)
    _, pl = _postlie_steps(op)
    steps.extend(pl)
    if not all(s["ok"] for s in pl):
        return _steps_outcome("pipeline", steps)
    if not add("maurer_cartan", mc_check(op)):
        return _steps_outcome("pipeline", steps)
    rng = random.Random(0)
    ok = all(coboundary_matches_twisted(op, _sample_cochain(rng, n, op), n) for n in (1, 2) for _ in range(2))
    ok = ok and coboundary_matches_twisted(op, op.t, 1)
    add("coboundary_matches_twisted_differential", ok)
    return _steps_outcome("pipeline", steps)


def cmd_catalog_list(args) -> Outcome:
    entries = io.catalog_entries()
    payload = {"command": "catalog list", "ok": True,
               "entries": [{"name": n, "kind": k, "description": d} for n, k, d in entries]}
    width = max((len(n) for n, _, _ in entries), default=0)
    lines = [f"{n.ljust(width)}  {k:<8}  {d}" for n, k, d in entries]
    return Outcome(PASS, payload, lines)


def cmd_catalog_show(args) -> Outcome:
    path = io.catalog_dir() / f"{args.name}.json"
    if not path.is_file():
        raise InputError(f"no catalog entry named {args.name!r}")
    doc, _ = io.load_document(str(path))
    return Outcome(PASS, {"command": "catalog show", "ok": True, "name": args.name, "entry": doc},
                   [json.dumps(doc, indent=2)])


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    parser = argparse.ArgumentParser(prog="trilie", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="check the axioms of a definition")
    p.add_argument("ref", help="file path or catalog name")
    p.add_argument("--kind", required=True, choices=("algebra", "action", "operator", "postlie"))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("semidirect", parents=[common], help="semidirect product of an action")
    p.add_argument("action")
    p.add_argument("--lambda", dest="lam", default="1", help="weight as p/q (default 1)")
    p.set_defaults(func=cmd_semidirect)

    rb = sub.add_parser("rb", help="Rota-Baxter operators").add_subparsers(dest="rb_command", required=True)
    p = rb.add_parser("check", parents=[common], help="verify an operator three ways")
    p.add_argument("operator")
    p.set_defaults(func=cmd_rb_check)
    p = rb.add_parser("search", parents=[common], help="enumerate operators with entries from a finite set")
    p.add_argument("action")
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--entries", default="-1,0,1", help="comma-separated rationals (default -1,0,1)")
    p.add_argument("--diagonal", action="store_true", help="vary only the diagonal")
    p.set_defaults(func=cmd_rb_search)

    p = sub.add_parser("postlie", parents=[common], help="induced 3-post-Lie algebra of an operator")
    p.add_argument("operator")
    p.set_defaults(func=cmd_postlie)

    mc = sub.add_parser("mc", help="Maurer-Cartan checks").add_subparsers(dest="mc_command", required=True)
    p = mc.add_parser("check", parents=[common], help="operator as a Maurer-Cartan element")
    p.add_argument("operator")
    p.set_defaults(func=cmd_mc_check)
    p = mc.add_parser("twisted-check", parents=[common], help="perturbation as a twisted Maurer-Cartan element")
    p.add_argument("operator")
    p.add_argument("map")
    p.set_defaults(func=cmd_mc_twisted)

    co = sub.add_parser("cohomology", help="operator cohomology").add_subparsers(dest="co_command", required=True)
    p = co.add_parser("dims", parents=[common], help="dimensions of Z, B and H")
    p.add_argument("operator")
    p.add_argument("--degree", type=int, required=True)
    p.set_defaults(func=cmd_cohomology_dims)

    de = sub.add_parser("deform", help="infinitesimal deformations").add_subparsers(dest="de_command", required=True)
    p = de.add_parser("classify", parents=[common], help="cocycle test and triviality witness")
    p.add_argument("operator")
    p.add_argument("map")
    p.set_defaults(func=cmd_deform_classify)

    p = sub.add_parser("pipeline", parents=[common], help="run the full chain of checks on an operator")
    p.add_argument("operator")
    p.set_defaults(func=cmd_pipeline)

    cat = sub.add_parser("catalog", help="bundled examples").add_subparsers(dest="cat_command", required=True)
    p = cat.add_parser("list", parents=[common])
    p.set_defaults(func=cmd_catalog_list)
    p = cat.add_parser("show", parents=[common])
    p.add_argument("name")
    p.set_defaults(func=cmd_catalog_show)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = args.func(args)
    except InputError as exc:
        return _emit_error(args, BAD_INPUT, "input error", str(exc))
    except ComplexError as exc:
        return _emit_error(args, FAIL, "internal consistency failure", str(exc))
    if args.json:
        print(json.dumps(out.payload, indent=2))
    else:
        for line in out.lines:
            print(line)
    return out.status


def _emit_error(args, status: int, label: str, message: str) -> int:
    if args.json:
        print(json.dumps({"command": args.command, "ok": False, "error": label, "message": message}, indent=2))
    else:
        print(f"trilie: {label}: {message}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
