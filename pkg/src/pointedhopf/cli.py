"""Command-line entry point: ``pointedhopf <command> ...``.

Every command prints one JSON report on stdout.  Exit codes: 0 ok,
2 validation failure, 3 not dominant, 4 inconclusive, 5 budget exceeded.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from pathlib import Path
from typing import List, Optional, Sequence

from .abgroup import Character
from .datum import (PRESETS, ReducedDatum, bipartite_partition, datum_to_json, is_generic,
                    linkable, linking_graph, load_json, preset, project_datum, reduced_to_json, to_reduced)
from .errors import NotDominant, ParseError, PointedHopfError
from .rep import (build_module, check_simplicity, chi_for_exponents, enumerate_dominant,
                  finite_qls, is_dominant, module_for_datum, module_from_json, module_to_json,
                  verify_module)

EXIT_OK = 0

DIM_CAP_ENV = "POINTEDHOPF_DIM_CAP"
MAX_LENGTH_ENV = "POINTEDHOPF_MAX_LENGTH"


def digest_inputs(args) -> str:
    """sha256 over the parsed arguments and the bytes of the input file, if any."""
    h = hashlib.sha256()
    items = sorted((k, v) for k, v in vars(args).items() if k != "timing")
    h.update(json.dumps(items, default=str).encode())
    path = getattr(args, "path", None)
    if path and Path(path).is_file():
        h.update(Path(path).read_bytes())
    return h.hexdigest()


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _read_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}", detail={"path": path}) from None
    try:
        return json.loads(text), text
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc.msg}",
                         detail={"path": path, "line": exc.lineno, "column": exc.colno}) from None


def _load(path: str):
    obj, text = _read_json(path)
    return load_json(obj), text


def _parse_chi(text: str, group, field) -> Character:
    try:
        values = json.loads(text)
    except json.JSONDecodeError:
        values = [v.strip() for v in text.split(",")]
    if not isinstance(values, list):
        values = [values]
    out = []
    for k, v in enumerate(values):
        try:
            out.append(field.coerce(v))
        except ParseError as exc:
            raise ParseError(f"chi[{k}]: {exc}", detail={"path": f"chi[{k}]"}) from None
    try:
        return Character(group, out)
    except ValueError as exc:
        raise ParseError(f"chi: {exc}", detail={"path": "chi"}) from None


def _write(path: Optional[str], payload: str):
    if path:
        Path(path).write_text(payload)


def _budgets(args):
    dim_cap = args.dim_cap if args.dim_cap is not None else int(os.environ.get(DIM_CAP_ENV, 200))
    env_len = os.environ.get(MAX_LENGTH_ENV)
    max_length = args.budget if args.budget is not None else (int(env_len) if env_len else None)
    return dim_cap, max_length


def _side_override(args) -> List[int]:
    return [k - 1 for k in (args.side_override or [])]


def _reduced_of(loaded, side_override=()):
    """(ReducedDatum, PiSpec-or-None) for either document kind."""
    if isinstance(loaded, ReducedDatum):
        return loaded, None
    d, lam = loaded
    part = bipartite_partition(d, lam, side_override or None)
    dp, lamp, pi = project_datum(d, lam, part)
    return to_reduced(dp, lamp), pi


# ---------------------------------------------------------------- commands

def cmd_validate(args) -> dict:
    loaded, _ = _load(args.path)
    if isinstance(loaded, ReducedDatum):
        r = loaded
        d, lam = r.doubled()
        out = {"kind": "reduced", "rank": r.n, "generic": r.is_generic(),
               "braiding": [[str(r.qij(i, j)) for j in range(r.n)] for i in range(r.n)],
               "q_J": [None if v is None else str(v) for v in r.qJ],
               "cartan_types": list(r.cartan.data.types)}
        return out
    d, lam = loaded
    generic, first = is_generic(d)
    out = {
        "kind": "datum",
        "theta": d.theta,
        "braiding": [[str(v) for v in row] for row in d.q],
        "q_J": [None if v is None else str(v) for v in d.qJ],
        "cartan_types": list(d.cartan.data.types),
        "generic": generic,
        "first_root_of_unity": None if first is None else first + 1,
        "linkable_pairs": [[i + 1, j + 1] for i in range(d.theta) for j in range(i + 1, d.theta)
                           if linkable(d, i, j)],
        "linked_pairs": [[i + 1, j + 1] for i, j in lam.linked_pairs()],
        "warnings": list(lam.warnings),
    }
    try:
        part = bipartite_partition(d, lam)
        out["linking_graph"] = {"bipartite": True, "partition": part.describe()}
    except PointedHopfError as exc:
        if exc.code != "OddCycle":
            raise
        out["linking_graph"] = {"bipartite": False, "odd_cycle": exc.detail}
        out["warnings"].append("linking graph has an odd cycle")
    return out


def cmd_graph(args) -> dict:
    loaded, _ = _load(args.path)
    if isinstance(loaded, ReducedDatum):
        loaded = loaded.doubled()
    d, lam = loaded
    graph = linking_graph(d, lam)
    part = bipartite_partition(d, lam, _side_override(args) or None)
    coloring = {k: "-" for k in part.minus_components}
    coloring.update({k: "+" for k in part.plus_components})
    dot = graph.dot(coloring)
    _write(args.dot_out, dot)
    out = {"partition": part.describe(), "components": [[v + 1 for v in c] for c in graph.components],
           "edges": [[a + 1, b + 1] for a, b in graph.edges]}
    if not args.dot_out:
        out["dot"] = dot
    return out


def cmd_reduce(args) -> dict:
    loaded, _ = _load(args.path)
    if isinstance(loaded, ReducedDatum):
        return {"reduced": reduced_to_json(loaded)}
    d, lam = loaded
    part = bipartite_partition(d, lam, _side_override(args) or None)
    dp, lamp, pi = project_datum(d, lam, part)
    r = to_reduced(dp, lamp)
    out = {"projection": pi.describe(), "datum_prime": datum_to_json(dp, lamp),
           "reduced": reduced_to_json(r)}
    _write(args.out, _dump(out["reduced"]))
    return out


def cmd_dominant(args) -> dict:
    loaded, _ = _load(args.path)
    r, _ = _reduced_of(loaded, _side_override(args))
    if args.enumerate:
        rows = []
        for m, chi in enumerate_dominant(r, args.bound):
            rows.append({"m": list(m), "chi": chi.literals()})
        return {"reduced_rank": r.n, "bound": args.bound, "characters": rows}
    if args.check is None:
        raise ParseError("dominant needs --check CHI or --enumerate", detail={"path": "args"})
    chi = _parse_chi(args.check, r.group, r.field)
    cert = is_dominant(r, chi, args.bound)
    if cert is None:
        raise NotDominant("character is not dominant", detail={"chi": chi.literals()})
    return {"dominant": True, "certificate": cert.describe()}


def cmd_module(args) -> dict:
    loaded, _ = _load(args.path)
    dim_cap, max_length = _budgets(args)
    if isinstance(loaded, ReducedDatum):
        r = loaded
        chi = _parse_chi(args.chi, r.group, r.field) if args.chi else chi_for_exponents(r, args.m)
        rep = build_module(r, chi, dim_cap=dim_cap, max_length=max_length, bound=args.bound)
    else:
        d, lam = loaded
        if args.chi is None:
            raise ParseError("module on a datum file needs --chi", detail={"path": "args"})
        chi = _parse_chi(args.chi, d.group, d.field)
        part = bipartite_partition(d, lam, _side_override(args) or None)
        if d.group.is_finite():
            rep = finite_qls(d, lam, chi, part)
        else:
            rep = module_for_datum(d, lam, chi, part, dim_cap=dim_cap, max_length=max_length,
                                   bound=args.bound)
    doc = module_to_json(rep)
    _write(args.out, _dump(doc))
    out = {"dim": rep.dim, "labels": rep.labels}
    if not args.out:
        out["module"] = doc
    return out


def cmd_verify(args) -> dict:
    obj, _ = _read_json(args.path)
    rep = module_from_json(obj)
    report = verify_module(rep)
    out = {"dim": report["dim"], "all_hold": report["all_hold"],
           "relations_checked": len(report["relations"]), "failures": report["failures"]}
    if args.simplicity:
        simple, witness = check_simplicity(rep)
        out["simple"] = simple
        out["witness_dim"] = None if witness is None else len(witness)
    if not report["all_hold"]:
        out["_exit"] = 2
    return out


def cmd_twist_check(args) -> dict:
    from .twist import cocycle_check, reduced_linking_check, spec_from_datum, spec_from_reduced

    loaded, _ = _load(args.path)
    if isinstance(loaded, ReducedDatum):
        spec = spec_from_reduced(loaded)
        report = {"cocycle": cocycle_check(spec, args.degree),
                  "reduced_linking": reduced_linking_check(spec, loaded)}
    else:
        d, lam = loaded
        part = bipartite_partition(d, lam, _side_override(args) or None)
        report = {"cocycle": cocycle_check(spec_from_datum(d, lam, part), args.degree)}
    return report


def cmd_preset(args) -> dict:
    if args.action == "list":
        return {"presets": [{"name": k, "kind": v[2], "defaults": v[1], "description": v[3]}
                            for k, v in sorted(PRESETS.items())]}
    if not args.name:
        raise ParseError("preset emit needs a name", detail={"path": "args"})
    params = {}
    for item in args.param or []:
        if "=" not in item:
            raise ParseError(f"parameter {item!r} must look like key=value", detail={"path": item})
        k, v = item.split("=", 1)
        try:
            params[k] = json.loads(v)
        except json.JSONDecodeError:
            params[k] = v
    try:
        built = preset(args.name, params)
    except KeyError as exc:
        raise ParseError(str(exc.args[0]), detail={"path": "name"}) from None
    doc = reduced_to_json(built) if isinstance(built, ReducedDatum) else datum_to_json(*built)
    if not isinstance(built, ReducedDatum):
        doc["preset"] = {"name": args.name, "params": params}
    _write(args.out, _dump(doc))
    return {"document": doc}


COMMANDS = {
    "validate": cmd_validate, "graph": cmd_graph, "reduce": cmd_reduce, "dominant": cmd_dominant,
    "module": cmd_module, "verify": cmd_verify, "twist-check": cmd_twist_check, "preset": cmd_preset,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pointedhopf", description="Simple modules of pointed Hopf algebras.")
    p.add_argument("--timing", action="store_true", help="add wall-clock timing to the report")
    sub = p.add_subparsers(dest="command", required=True)

    def datum_cmd(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("path")
        sp.add_argument("--side-override", type=int, nargs="*", metavar="K",
                        help="1-based vertices whose components must lie in I-")
        return sp

    datum_cmd("validate", "validate a datum or reduced-datum file")
    g = datum_cmd("graph", "linking graph as DOT plus bipartition")
    g.add_argument("--dot-out")
    r = datum_cmd("reduce", "project to D' and emit the reduced datum")
    r.add_argument("--out")
    d = datum_cmd("dominant", "check or enumerate dominant characters")
    d.add_argument("--check", metavar="CHI")
    d.add_argument("--enumerate", action="store_true")
    d.add_argument("--bound", type=int, default=3)
    m = datum_cmd("module", "build L(chi) and write its matrices")
    m.add_argument("--chi")
    m.add_argument("--m", type=int, nargs="*", help="exponents m_i (reduced files, instead of --chi)")
    m.add_argument("--out")
    m.add_argument("--bound", type=int, default=20, help="search bound for non-monomial dominance")
    m.add_argument("--budget", type=int, help="Nichols length budget")
    m.add_argument("--dim-cap", type=int)
    v = sub.add_parser("verify", help="check every defining relation on a module file")
    v.add_argument("path")
    v.add_argument("--simplicity", action="store_true")
    t = datum_cmd("twist-check", "pairing and cocycle identities up to a degree")
    t.add_argument("--degree", type=int, default=2)
    pr = sub.add_parser("preset", help="list presets or emit one as JSON")
    pr.add_argument("action", choices=["list", "emit"])
    pr.add_argument("name", nargs="?")
    pr.add_argument("--param", action="append", metavar="KEY=VALUE")
    pr.add_argument("--out")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    report = {"command": args.command, "inputs_digest": digest_inputs(args)}
    code = EXIT_OK
    try:
        result = COMMANDS[args.command](args)
        code = result.pop("_exit", EXIT_OK) if isinstance(result, dict) else EXIT_OK
        report["outcome"] = "ok" if code == EXIT_OK else "failed"
        report["result"] = result
    except PointedHopfError as exc:
        code = exc.exit_code
        report["outcome"] = exc.code
        report["error"] = exc.as_dict()
    if args.timing:
        report["timing_seconds"] = round(time.perf_counter() - start, 3)
    sys.stdout.write(_dump(report))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
