"""Command-line front end.

Every command reads one JSON file and prints a report. Reports are
deterministic: the same file and flags give byte-identical output. Timing is
printed only with ``--timing``.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Callable

from . import io
from .cohom import (
    CechProblem,
    bridge_to_descent,
    cech_h1,
    colim_decomposition,
    colim_via_grothendieck,
    double_cosets,
    h1_nonabelian,
    lim1_tower,
)
from .conj import conjugates_bruteforce, conjugates_formula
from .descent import is_equivalence, theorem_b
from .fincat.core import ENV_MAX_CANDIDATES, SizeGuardError, check_adjunction
from .groth import grothendieck, is_cocartesian, lax_limit, pseudo_limit

SCHEMA_VERSION = 1


@dataclass
class RunReport:
    command: str
    input_digest: str
    result: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    ok: bool = True
    timing: float | None = None

    def as_dict(self) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "input_digest": self.input_digest,
            "result": io.jsonable(self.result),
            "warnings": list(self.warnings),
            "ok": self.ok,
        }
        if self.timing is not None:
            out["timing_seconds"] = round(self.timing, 6)
        return out

    def render(self, as_json: bool) -> str:
        d = self.as_dict()
        if as_json:
            return json.dumps(d, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
        lines = [f"{self.command}: {'ok' if self.ok else 'FAILED'}"]
        for k in sorted(d["result"]):
            lines.append(f"  {k}: {json.dumps(d['result'][k], sort_keys=True, ensure_ascii=False)}")
        for w in self.warnings:
            lines.append(f"  warning: {w}")
        if "timing_seconds" in d:
            lines.append(f"  timing: {d['timing_seconds']}s")
        return "\n".join(lines) + "\n"


def _classes(res) -> dict:
    return {"count": res.count, "classes": res.representatives}


# --- commands -----------------------------------------------------------------------


def cmd_validate(data: Any, args) -> tuple[dict, list, bool]:
    kind = io.detect_schema(data)
    try:
        if kind == "problem":
            p = io.problem_from_json(data)
            info = {"apex_objects": len(p.cone.apex.objects), "base_object": p.base}
        elif kind == "adjunction":
            L = io.levelwise_from_json(data)
            info = {"levels": len(L.rights)}
        elif kind == "cone":
            cone = io.cone_from_json(data)
            info = {"apex_objects": len(cone.apex.objects), "legs": len(cone.legs)}
        elif kind == "diagram":
            D = io.diagram_from_json(data)
            info = {"index_objects": len(D.index.objects), "index_morphisms": len(D.index.morphisms)}
        elif kind == "functor":
            reg = io._registry(data)
            dom = io.category_from_json(data["dom"], "dom", reg)
            cod = io.category_from_json(data["cod"], "cod", reg)
            io.functor_from_json(dom, cod, data, "functor")
            info = {}
        else:
            C = io.category_from_json(data)
            info = {"objects": len(C.objects), "morphisms": len(C.morphisms)}
    except ValueError as exc:
        return {"schema": kind, "valid": False, "error": str(exc)}, [], False
    return {"schema": kind, "valid": True, **info}, [], True


def cmd_conj(data: Any, args) -> tuple[dict, list, bool]:
    p = io.problem_from_json(data, base=args.object)
    result: dict = {"base_object": p.base}
    warnings: list = []
    ok = True
    if args.method in ("brute", "both"):
        b = conjugates_bruteforce(p)
        result["brute"] = {"count": b.count, "classes": b.classes}
    if args.method in ("formula", "both"):
        f = conjugates_formula(p, max_candidates=args.max_candidates)
        result["formula"] = {"count": f.count, "data": f.representatives}
        warnings.extend(f.warnings)
    if args.method == "both":
        result["equal"] = result["brute"]["count"] == result["formula"]["count"]
        ok = result["equal"]
    return result, warnings, ok


def cmd_descent_check(data: Any, args) -> tuple[dict, list, bool]:
    L = io.levelwise_from_json(data)
    res = theorem_b(L, max_candidates=args.max_candidates)
    rep = check_adjunction(res.adjunction)
    eq = is_equivalence(res)
    P = res.pseudo
    index = {y: i for i, y in enumerate(P.objects)}
    result = {
        "pseudo_limit": {"objects": len(P.objects), "morphisms": len(P.morphisms)},
        "adjunction_laws": rep.ok,
        "failures": rep.failures,
        "equivalence": eq.ok,
        "right_adjoint": [{"section": y, "value": res.right(y)} for y in P.objects],
        "unit": {x: res.unit[x] for x in L.cone.apex.objects},
        "counit": [{"section": index[y], "components": res.counit[y].components} for y in P.objects],
    }
    if eq.witness is not None:
        kind, obj, comp = eq.witness
        result["witness"] = {
            "kind": kind,
            "at": index[obj] if kind == "counit" else obj,
            "component": comp.components if kind == "counit" else comp,
        }
    return result, [], rep.ok


def _bridge(args, problem, result: dict) -> bool:
    if not args.bridge:
        return True
    b = bridge_to_descent(problem, max_candidates=args.max_candidates)
    result["bridge"] = {"descent_count": b.descent_count, "equal": b.ok}
    return b.ok


def cmd_h1(data, args):
    act = io.action_from_json(data)
    result = _classes(h1_nonabelian(act, max_candidates=args.max_candidates))
    return result, [], _bridge(args, act, result)


def cmd_dcoset(data, args):
    prob = io.dcoset_from_json(data)
    result = _classes(double_cosets(prob.K, prob.maps, max_candidates=args.max_candidates))
    return result, [], _bridge(args, prob, result)


def cmd_cech(data, args):
    prob: CechProblem = io.cech_from_json(data)
    result = _classes(cech_h1(prob.cover, prob.group, max_candidates=args.max_candidates))
    return result, [], _bridge(args, prob, result)


def cmd_lim1(data, args):
    tower = io.tower_from_json(data)
    result = _classes(lim1_tower(tower, max_candidates=args.max_candidates))
    result["surjective"] = tower.surjective()
    return result, [], _bridge(args, tower, result)


def cmd_colim(data, args):
    pieces, K, incl, f = io.colim_from_json(data)
    rep = colim_decomposition(pieces, K, incl, f, max_candidates=args.max_candidates)
    result = {
        "total": rep.total,
        "iterated": rep.iterated,
        "partial": rep.partial,
        "comparison": rep.comparison,
        "isomorphic": rep.ok,
    }
    ok = rep.ok
    if args.bridge:
        via = colim_via_grothendieck(pieces, K, incl, f, max_candidates=args.max_candidates)
        same = any(f.cod.is_invertible(m) for m in f.cod.hom(via, rep.total))
        result["bridge"] = {"grothendieck": via, "equal": same}
        ok = ok and same
    return result, [], ok


def cmd_lax(data, args):
    D = io.diagram_from_json(data)
    L = lax_limit(D, max_candidates=args.max_candidates)
    P = pseudo_limit(D, max_candidates=args.max_candidates)
    return {
        "lax_limit": {"objects": len(L.objects), "morphisms": len(L.morphisms)},
        "pseudo_limit": {"objects": len(P.objects), "morphisms": len(P.morphisms)},
    }, [], True


def cmd_groth(data, args):
    D = io.diagram_from_json(data)
    total, _ = grothendieck(D, max_candidates=args.max_candidates)
    cocart = sum(1 for m in total.morphisms if is_cocartesian(total, m))
    return {
        "objects": len(total.objects),
        "morphisms": len(total.morphisms),
        "cocartesian_morphisms": cocart,
    }, [], True


COMMANDS: dict[str, Callable] = {
    "validate": cmd_validate,
    "conj": cmd_conj,
    "descent-check": cmd_descent_check,
    "h1": cmd_h1,
    "dcoset": cmd_dcoset,
    "cech": cmd_cech,
    "lim1": cmd_lim1,
    "colim": cmd_colim,
    "lax": cmd_lax,
    "groth": cmd_groth,
}

HELP = {
    "validate": "validate a category, functor, diagram, cone, adjunction or problem file",
    "conj": "count conjugates of an object by brute force and by descent data",
    "descent-check": "build the descent adjunction and test whether it is an equivalence",
    "h1": "nonabelian H1 of a group action",
    "dcoset": "double cosets of a multi-span of groups",
    "cech": "Čech H1 of a combinatorial cover",
    "lim1": "lim1 of a finite stabilized tower of groups",
    "colim": "compare a colimit with its iterated decomposition",
    "lax": "object and morphism counts of the lax and pseudo limits",
    "groth": "object and morphism counts of the Grothendieck construction",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="descentkit", description="Finite descent computations.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, help=HELP[name])
        p.add_argument("path", help="input JSON file")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--timing", action="store_true", help="include wall-clock timing")
        p.add_argument(
            "--max-candidates",
            type=int,
            default=None,
            help=f"enumeration bound (default from ${ENV_MAX_CANDIDATES} or 10^6)",
        )
        if name == "conj":
            p.add_argument("--object", default=None, help="base object (defaults to base_object in the file)")
            p.add_argument("--method", choices=["formula", "brute", "both"], default="both")
        if name in ("h1", "dcoset", "cech", "lim1", "colim"):
            p.add_argument("--bridge", action="store_true", help="recount through an independent descent computation")
    return parser


def run(argv: list[str] | None = None) -> tuple[RunReport, bool]:
    args = build_parser().parse_args(argv)
    try:
        raw = open(args.path, "rb").read()
    except OSError as exc:
        rep = RunReport(args.command, "", {"error": f"cannot read {args.path}: {exc.strerror}"}, ok=False)
        return rep, args.json
    digest = hashlib.sha256(raw).hexdigest()
    start = time.perf_counter()
    try:
        data = json.loads(raw.decode("utf-8"))
        result, warnings, ok = COMMANDS[args.command](data, args)
    except json.JSONDecodeError as exc:
        result, warnings, ok = {"error": f"parse error at line {exc.lineno} column {exc.colno}: {exc.msg}"}, [], False
    except (ValueError, KeyError, LookupError, SizeGuardError, AssertionError) as exc:
        msg = str(exc) if not isinstance(exc, KeyError) else f"missing key {exc}"
        result, warnings, ok = {"error": msg}, [], False
    elapsed = time.perf_counter() - start
    rep = RunReport(args.command, digest, result, warnings, ok, elapsed if args.timing else None)
    return rep, args.json


def main(argv: list[str] | None = None) -> int:
    rep, as_json = run(argv)
    sys.stdout.write(rep.render(as_json))
    return 0 if rep.ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
