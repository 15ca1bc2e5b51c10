"""Command-line interface.  Every command prints one JSON (or DOT) document.

Exit status: 0 pass, 1 verification failure, 2 input error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import fixtures
from .complex import CellSet, cell_key, hasse_diagram, height
from .dot import export_dot
from .errors import MorseError, ParseError
from .filtration import Levels, retract_check, structure_scan
from .gradient import (
    check_function,
    closed_vpaths,
    critical_cells,
    function_from_gradient,
    gradient_from_function,
    is_acyclic,
    validate_field,
)
from .generate import instance
from .homology import Z, Z2, betti_of, bm_report, homology, morse_complex, relative_chain, simplicial_complex_chain
from .induced import correspondence, extend_function, extend_to_pair, induce, restrict
from .io import dumps, field_document, function_document, pair_document, parse_field, parse_function, parse_pair

PASS, FAIL, INPUT_ERROR = 0, 1, 2


class Inputs:
    def __init__(self, args):
        self.timings = {}
        if getattr(args, "fixture", None):
            base = fixtures.data_path(f"{args.fixture}.pair.json")
            pair_src = Path(str(base))
            field_src = Path(str(fixtures.data_path(f"{args.fixture}.field.json")))
            fn = Path(str(fixtures.data_path(f"{args.fixture}.function.json")))
            function_src = fn if fn.exists() else None
        else:
            if not args.pair:
                raise ParseError("a pair document (or --fixture) is required")
            pair_src = args.pair
            field_src = args.field
            function_src = args.function
        try:
            doc = json.loads(Path(pair_src).read_text())
        except (OSError, ValueError):
            doc = None  # parse_pair reports the problem with its locus
        if isinstance(doc, dict) and "pair" in doc:
            # combined document as emitted by `gen`
            self.pair, self.labels = parse_pair(doc["pair"])
            if field_src is None and "field" in doc:
                field_src = doc["field"]
        else:
            self.pair, self.labels = parse_pair(pair_src)
        self.field = parse_field(field_src, self.pair, self.labels) if field_src is not None else None
        self.function = parse_function(function_src, self.pair, self.labels) if function_src is not None else None

    def name(self, c) -> str:
        if c and isinstance(c[0], tuple):
            return "(" + "<".join(self.labels.name(s) for s in c) + ")"
        return self.labels.name(c)

    def names(self, cells) -> list:
        return [self.name(c) for c in sorted(cells, key=cell_key)]

    def require_field(self):
        if self.field is None:
            raise ParseError("this command needs a field document")
        bad = validate_field(self.field)
        if bad:
            raise ParseError("; ".join(v.detail for v in bad[:5]), "field")
        if not is_acyclic(self.field):
            raise ParseError("field has a closed V-path", "field")
        return self.field


def _ring(args) -> str:
    return Z2 if getattr(args, "coeff", "z") == "z2" else Z


def _crit_json(inp: Inputs, V) -> dict:
    crit = critical_cells(V)
    top = max(V.domain.dim, max(crit, default=-1))
    return {"counts": [len(crit.get(d, ())) for d in range(top + 1)],
            "cells": {str(d): inp.names(cs) for d, cs in sorted(crit.items())}}


def cmd_validate(args, inp: Inputs):
    out = {"pair": {"X": list(inp.pair.X.f_vector), "T": list(inp.pair.T.f_vector),
                    "K": list(inp.pair.K.f_vector)}}
    ok = True
    if inp.field is not None:
        bad = validate_field(inp.field)
        acyclic = not bad and is_acyclic(inp.field)
        out["field"] = {"violations": [{"kind": v.kind, "cells": inp.names(v.cells), "detail": v.detail} for v in bad],
                        "acyclic": acyclic}
        if acyclic and len(inp.pair.K) <= 12:
            out["field"]["closed_vpaths"] = len(closed_vpaths(inp.field))
        ok &= acyclic
    if inp.function is not None:
        bad = check_function(inp.function)
        out["function"] = {"violations": [{"kind": v.kind, "cells": inp.names(v.cells), "detail": v.detail} for v in bad]}
        ok &= not bad
        if not bad and inp.field is not None:
            same = gradient_from_function(inp.function).pairs == inp.field.pairs
            out["function"]["gradient_matches_field"] = same
            ok &= same
    out["valid"] = ok
    return out, ok


def cmd_critical(args, inp: Inputs):
    V = inp.require_field()
    out = _crit_json(inp, V)
    out["heights"] = {inp.name(c): height(c, inp.pair.K)
                      for cs in critical_cells(V).values() for c in cs}
    return out, True


def cmd_function(args, inp: Inputs):
    V = inp.require_field()
    V_X = extend_to_pair(V, inp.pair)
    f = function_from_gradient(V_X, inp.function.values if inp.function else None)
    return function_document(f, inp.labels), True


def _induce(inp: Inputs):
    t = time.perf_counter()
    ind = induce(inp.require_field(), inp.pair, inp.function)
    W = restrict(ind)
    F = extend_function(ind)
    inp.timings["induce"] = time.perf_counter() - t
    return ind, W, F


def _correspondence_ok(ind) -> bool:
    corr = correspondence(ind)
    return all(len(v) == 1 and len(v[0]) == len(s) and v[0][-1] == s for s, v in corr.items())


def cmd_induce(args, inp: Inputs):
    ind, W, F = _induce(inp)
    if args.format == "dot":
        return export_dot(W.field, name=inp.name, skeleton=True), True
    corr = correspondence(ind)
    exits_ok = all(W.field.is_critical(c) and len(c) - 1 == height(s, inp.pair.K)
                   for s, c in ind.exit_cells.items())
    out = {
        "sd": list(ind.sd.f_vector),
        "order_complex": list(ind.s_k.f_vector),
        "induced_critical": {inp.name(s): inp.names(v) for s, v in corr.items()},
        "restricted": {
            "counts": W.counts(),
            "cells": [{"cell": inp.name(c), "tag": W.tags[c], "value": F.values[c]}
                      for c in sorted(W.tags, key=cell_key)],
        },
        "exit_cells": {inp.name(s): inp.name(c) for s, c in sorted(ind.exit_cells.items(), key=lambda kv: cell_key(kv[0]))},
        "correspondence": _correspondence_ok(ind),
        "exit_cells_critical": exits_ok,
    }
    ok = out["correspondence"] and exits_ok
    return out, ok


def cmd_homology(args, inp: Inputs):
    ring = _ring(args)
    n = max(inp.pair.X.dim + 1, 1)
    out = {"coefficients": ring}
    for key, C in (("X", simplicial_complex_chain(inp.pair.X, ring)),
                   ("T", simplicial_complex_chain(inp.pair.T, ring)),
                   ("X,T", relative_chain(inp.pair, ring))):
        out[key] = homology(C).trimmed(n).as_dict()
    return out, True


def cmd_bm(args, inp: Inputs):
    r = bm_report(inp.pair, inp.require_field())
    return r.as_dict(), r.passed


def cmd_morse(args, inp: Inputs):
    ring = _ring(args)
    M = morse_complex(inp.require_field(), ring)
    C = M.chain
    out = {"coefficients": ring,
           "basis": {str(d): inp.names(b) for d, b in sorted(C.bases.items())},
           "boundary": {str(d): C.dense(d) for d in sorted(C.bases) if d > 0},
           "homology": homology(C).as_dict()}
    return out, True


def _sweep(levels: Levels, V, jobs: int):
    th = levels.thresholds()
    fn = lambda a: retract_check(levels.level(a), levels.F, V, levels.sd)
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as ex:
            return list(ex.map(fn, th))
    return [fn(a) for a in th]


def cmd_verify(args, inp: Inputs):
    V = inp.require_field()
    t = time.perf_counter()
    bm = bm_report(inp.pair, V)
    inp.timings["bm"] = time.perf_counter() - t
    ind, W, F = _induce(inp)
    t = time.perf_counter()
    scan = structure_scan(F.restrict(ind.s_k), W.field, V)
    inp.timings["scan"] = time.perf_counter() - t
    t = time.perf_counter()
    levels = Levels(F, ind.sd, ind.s_k, inp.pair.T)
    sweep = _sweep(levels, ind.field, args.jobs)
    inp.timings["retraction"] = time.perf_counter() - t
    stuck = [r for r in sweep if not r.success]
    out = {
        "bm": bm.as_dict(),
        "restricted_counts": W.counts(),
        "order_complex_betti": list(scan.final_betti),
        "correspondence": _correspondence_ok(ind),
        "scan": {"critical_values": scan.critical_values, "attach_counts": scan.attach_counts,
                 "critical_by_height": scan.height_counts, "passed": scan.passed},
        "retraction": {"thresholds": len(sweep), "stuck": [{"threshold": r.threshold, "cell": inp.name(r.stuck)} for r in stuck]},
    }
    ok = bm.passed and scan.passed and not stuck and out["correspondence"]
    out["passed"] = ok
    return out, ok


def cmd_filtration(args, inp: Inputs):
    ind, W, F = _induce(inp)
    scan = structure_scan(F.restrict(ind.s_k), W.field, inp.field)
    levels = Levels(F, ind.sd, ind.s_k, inp.pair.T)
    if args.threshold is not None:
        lv = levels.level(args.threshold)
        r = retract_check(lv, F, ind.field, ind.sd)
        out = {"threshold": args.threshold,
               "order_complex_level": inp.names(lv.s_k),
               "sd_level_size": len(lv.sd_x),
               "open_level": inp.names(lv.k_a),
               "betti": list(betti_of(CellSet(lv.s_k))) if lv.s_k else [],
               "retraction": {"success": r.success, "steps": len(r.steps),
                              "stuck": inp.name(r.stuck) if r.stuck else None}}
        return out, r.success
    rep = scan.as_dict(inp.name)
    lo = args.lo if args.lo is not None else float("-inf")
    hi = args.hi if args.hi is not None else float("inf")
    if args.lo is not None or args.hi is not None:
        def inside(e):
            if e["kind"] == "attach":
                return lo <= e["value"] <= hi
            a = e["from"] if e["from"] is not None else float("-inf")
            b = e["to"] if e["to"] is not None else float("inf")
            return a < hi and b > lo
        rep["events"] = [e for e in rep["events"] if inside(e)]
        rep["critical_values"] = [v for v in rep["critical_values"] if lo <= v <= hi]
    if args.format == "dot":
        return export_dot(rep), scan.passed
    return rep, scan.passed


def cmd_gen(args, inp=None):
    ins = instance(args.seed, args.vmax, args.dim)
    doc = {"pair": pair_document(ins.pair), "field": field_document(ins.field), "seed": args.seed}
    if args.out:
        Path(f"{args.out}.pair.json").write_text(dumps(doc["pair"]))
        Path(f"{args.out}.field.json").write_text(dumps(doc["field"]))
    return doc, True


def cmd_export_dot(args, inp: Inputs):
    what = args.what
    if what == "hasse":
        H = hasse_diagram(inp.pair.K)
        return export_dot(H, inp.field, name=inp.name), True
    ind, W, F = _induce(inp)
    if what == "order-complex":
        return export_dot(W.field, name=inp.name, skeleton=True), True
    if what == "order-hasse":
        return export_dot(W.field, name=inp.name), True
    scan = structure_scan(F.restrict(ind.s_k), W.field, inp.field)
    return export_dot(scan.as_dict(inp.name)), True


COMMANDS = {
    "validate": cmd_validate,
    "critical": cmd_critical,
    "induce": cmd_induce,
    "function": cmd_function,
    "homology": cmd_homology,
    "bm": cmd_bm,
    "morse": cmd_morse,
    "verify": cmd_verify,
    "filtration": cmd_filtration,
    "gen": cmd_gen,
    "export-dot": cmd_export_dot,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="openmorse", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        if name == "gen":
            s.add_argument("--seed", type=int, default=0)
            s.add_argument("--vmax", type=int, default=8)
            s.add_argument("--dim", type=int, default=3)
            s.add_argument("--out", help="write OUT.pair.json and OUT.field.json")
            s.add_argument("--format", choices=["json"], default="json")
            continue
        s.add_argument("pair", nargs="?", help="pair document")
        s.add_argument("field", nargs="?", help="field document")
        s.add_argument("function", nargs="?", help="function document")
        s.add_argument("--fixture", choices=fixtures.NAMES, help="use a bundled example instead of files")
        s.add_argument("--coeff", choices=["z", "z2"], default="z")
        s.add_argument("--threshold", type=float)
        s.add_argument("--from", dest="lo", type=float)
        s.add_argument("--to", dest="hi", type=float)
        s.add_argument("--jobs", type=int, default=1)
        s.add_argument("--timings", action="store_true", help="include wall-clock timings (breaks byte-identical output)")
        default = "dot" if name == "export-dot" else "json"
        s.add_argument("--format", choices=["json", "dot"], default=default)
        if name == "export-dot":
            s.add_argument("--what", choices=["hasse", "order-complex", "order-hasse", "filtration"], default="hasse")
    return p


def run(argv: list[str] | None = None) -> tuple[object, int]:
    args = build_parser().parse_args(argv)
    try:
        inp = None if args.command == "gen" else Inputs(args)
        result, ok = COMMANDS[args.command](args, inp)
    except (ParseError, OSError, json.JSONDecodeError) as e:
        return {"error": str(e), "kind": "input"}, INPUT_ERROR
    except MorseError as e:
        return {"error": str(e), "kind": type(e).__name__}, FAIL
    if isinstance(result, dict) and inp is not None and getattr(args, "timings", False):
        result["timings"] = {k: round(v, 6) for k, v in inp.timings.items()}
    return result, PASS if ok else FAIL


def main(argv: list[str] | None = None) -> int:
    result, code = run(argv)
    sys.stdout.write(result if isinstance(result, str) else dumps(result))
    return code


if __name__ == "__main__":
    sys.exit(main())
