"""scheme-forge command line.

Usage:
    scheme-forge verify INPUT [--format json|text]
    scheme-forge analyze INPUT
    scheme-forge classify INPUT
    scheme-forge oracle INPUT
    scheme-forge crosscheck INPUT
    scheme-forge enumerate --modulus N [--to M] [--emit-dir DIR] [--generators 3,5 ...]
    scheme-forge product (--wreath INNER OUTER | --lex-blowup SCHEME M) [--out FILE]
    scheme-forge catalog EXPR [--out FILE]

INPUT is a scheme/digraph JSON file or a catalog expression such as
``paley_tournament(7)``.  Exit status: 0 success, 1 property failure,
2 input or usage error.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import io
from .classify import ORACLE_MAX_D, crosscheck, oracle_enumerate, p_polynomial_orderings, theorem1_classify
from .closure import closure, wreath_decompositions, wreath_product
from .digraph import Digraph, profile
from .errors import AxiomError, BadParams, IdentityViolation, InputError, InternalError, SchemeForgeError, UnknownName
from .generators import catalog, enumerate_circulant, lex_blowup, parse_catalog
from .scheme import Scheme, relation_profile, verify_identities
from .wdrd import distance_regular_test, recognize_wdrd

VERBS = ("verify", "analyze", "classify", "oracle", "crosscheck", "enumerate", "product", "catalog")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class UsageError(SchemeForgeError):
    code = "UsageError"


@dataclass
class Command:
    verb: str
    inputs: list[str] = field(default_factory=list)
    options: dict = field(default_factory=dict)

    @property
    def format(self) -> str:
        return self.options.get("format", "text")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="text")

    p = _Parser(prog="scheme-forge", description="Association scheme and WDRD toolkit")
    sub = p.add_subparsers(dest="verb", parser_class=_Parser)
    sub.required = True
    for verb in ("verify", "analyze", "classify", "oracle", "crosscheck"):
        sp = sub.add_parser(verb, parents=[common])
        sp.add_argument("input")
    sp = sub.add_parser("enumerate", parents=[common])
    sp.add_argument("--modulus", type=int, required=True)
    sp.add_argument("--to", type=int, default=None, help="enumerate moduli modulus..to")
    sp.add_argument("--emit-dir", default=None)
    sp.add_argument("--generators", action="append", default=None,
                    help="comma-separated multiplier generators; repeat for several subgroups")
    sp.add_argument("--max-orbits", type=int, default=8)
    sp = sub.add_parser("product", parents=[common])
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--wreath", nargs=2, metavar=("INNER", "OUTER"))
    group.add_argument("--lex-blowup", nargs=2, metavar=("SCHEME", "M"))
    sp.add_argument("--out", default=None)
    sp = sub.add_parser("catalog", parents=[common])
    sp.add_argument("expr")
    sp.add_argument("--out", default=None)
    return p


def parse(argv: Sequence[str]) -> Command:
    """Validate argv into a Command; raises UsageError on bad usage."""
    ns = _parser().parse_args(list(argv))
    opts = {k: v for k, v in vars(ns).items() if k not in ("verb", "input", "expr")}
    inputs = []
    if getattr(ns, "input", None) is not None:
        inputs = [ns.input]
    elif getattr(ns, "expr", None) is not None:
        inputs = [ns.expr]
    elif ns.verb == "product":
        inputs = list(ns.wreath or ns.lex_blowup)
        opts["mode"] = "wreath" if ns.wreath else "lex_blowup"
    if ns.verb == "enumerate" and ns.generators:
        try:
            opts["generators"] = [[int(v) for v in g.split(",") if v] for g in ns.generators]
        except ValueError as exc:
            raise UsageError(f"--generators: {exc}") from exc
    return Command(ns.verb, inputs, opts)


# ---------------------------------------------------------------------------

def _load(token: str) -> Scheme | Digraph:
    path = Path(token)
    if path.exists():
        return io.load_document(path)
    if "(" in token:
        try:
            return parse_catalog(token)
        except (BadParams, UnknownName) as exc:
            raise InputError("", str(exc)) from exc
    raise InputError("", f"no such file: {token}")


def _load_scheme(token: str) -> Scheme:
    obj = _load(token)
    if not isinstance(obj, Scheme):
        raise InputError("", f"{token} is a digraph; a scheme is required")
    return obj


def _scheme_summary(s: Scheme) -> dict:
    prof = relation_profile(s)
    return {"name": s.name, "n": s.n, "d": s.d, "valencies": list(s.k), **prof.to_dict()}


def _analyze_scheme(s: Scheme) -> dict:
    closures = []
    for i in range(1, s.d + 1):
        F = closure(s, {i})
        closures.append({"generator": i, "closed_subset": sorted(F.indices), "fiber_size": F.fiber_size})
    return {
        "kind": "scheme_analysis",
        **_scheme_summary(s),
        "p_polynomial": [{"generator": g, "ordering": o} for g, o in p_polynomial_orderings(s)],
        "closures": closures,
        "wreath_decompositions": [w.to_dict() for w in wreath_decompositions(s)],
    }


def _analyze_digraph(g: Digraph) -> dict:
    prof = profile(g)
    wd = recognize_wdrd(g)
    dr = distance_regular_test(g)
    return {
        "kind": "digraph_analysis",
        "n": g.n,
        "arcs": g.arc_count,
        **prof.to_dict(),
        "wdrd": wd.to_dict(),
        "distance_regular": None if dr is None else dr.to_dict(),
    }


def _enumerate(cmd: Command) -> dict:
    lo = cmd.options["modulus"]
    hi = cmd.options["to"] if cmd.options["to"] is not None else lo
    emit = cmd.options.get("emit_dir")
    if emit:
        Path(emit).mkdir(parents=True, exist_ok=True)
    rows = []
    for n in range(lo, hi + 1):
        for s in enumerate_circulant(n, generators=cmd.options.get("generators"),
                                     max_orbits=cmd.options["max_orbits"]):
            prof = relation_profile(s)
            rows.append({"name": s.name, "n": s.n, "d": s.d, "nonsymmetric_pairs": prof.nonsymmetric_pair_count,
                         "classes": s.provenance["classes"]})
            if emit:
                io.save_scheme(s, Path(emit) / f"{s.name}.json")
    return {"kind": "enumeration", "schemes": rows, "count": len(rows)}


def execute(cmd: Command) -> tuple[dict, int]:
    """Run a command; returns (report, exit status)."""
    try:
        return _execute(cmd)
    except (IdentityViolation, InternalError) as exc:
        return {"kind": "error", **exc.to_dict()}, EXIT_FAIL
    except (AxiomError, InputError, SchemeForgeError) as exc:
        return {"kind": "error", **exc.to_dict()}, EXIT_INPUT


def _execute(cmd: Command) -> tuple[dict, int]:
    verb = cmd.verb
    if verb == "verify":
        s = _load_scheme(cmd.inputs[0])
        return verify_identities(s).to_dict(), EXIT_OK
    if verb == "analyze":
        obj = _load(cmd.inputs[0])
        return (_analyze_scheme(obj) if isinstance(obj, Scheme) else _analyze_digraph(obj)), EXIT_OK
    if verb == "classify":
        s = _load_scheme(cmd.inputs[0])
        doc = theorem1_classify(s).to_dict()
        if s.d > ORACLE_MAX_D:
            doc["crosscheck"] = None
            return doc, EXIT_OK
        rep = crosscheck(s)
        doc["crosscheck"] = {"oracle": [list(a) for a in rep.oracle], "diff": [list(a) for a in rep.diff], "pass": rep.passed}
        return doc, EXIT_OK if rep.passed else EXIT_FAIL
    if verb == "oracle":
        s = _load_scheme(cmd.inputs[0])
        return {"kind": "oracle", "scheme_name": s.name, "admissible": [list(a) for a in oracle_enumerate(s)]}, EXIT_OK
    if verb == "crosscheck":
        rep = crosscheck(_load_scheme(cmd.inputs[0]))
        return rep.to_dict(), EXIT_OK if rep.passed else EXIT_FAIL
    if verb == "enumerate":
        return _enumerate(cmd), EXIT_OK
    if verb in ("product", "catalog"):
        if verb == "catalog":
            try:
                s = catalog(cmd.inputs[0])
            except (BadParams, UnknownName) as exc:
                raise InputError("", str(exc)) from exc
        elif cmd.options["mode"] == "wreath":
            inner, outer = (_load_scheme(t) for t in cmd.inputs)
            s = wreath_product(inner, outer)
        else:
            try:
                m = int(cmd.inputs[1])
            except ValueError as exc:
                raise InputError("", "M must be an integer") from exc
            s = lex_blowup(_load_scheme(cmd.inputs[0]), m)
        doc = io.scheme_to_doc(s)
        if cmd.options.get("out"):
            Path(cmd.options["out"]).write_text(io.dumps(doc), encoding="utf-8")
        return {"kind": "scheme", "document": doc, "summary": _scheme_summary(s)}, EXIT_OK
    raise UsageError(f"unknown verb {verb}")


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _set(a) -> str:
    return "{" + ",".join(str(v) for v in a) + "}"


def _sets(items) -> str:
    return "{" + ", ".join(_set(a) for a in items) + "}"


def _text(report: dict) -> str:
    kind = report.get("kind")
    lines: list[str] = []
    if kind == "identities":
        lines.append(f"scheme {report['scheme'] or '-'}  n={report['n']}  d={report['d']}")
        lines.append(f"{'identity':<10} {'instances':>10}  status")
        for row in report["identities"]:
            lines.append(f"{row['id']:<10} {row['instances']:>10}  {row['status']}")
    elif kind == "classification":
        lines.append(f"scheme {report['scheme_name'] or '-'}  d={report['d']}  labeling={report['labeling']}")
        if not report["applicable"]:
            lines.append(f"not applicable: {report['witnesses'].get('not_applicable')}")
        for c in report["candidates"]:
            if c["verdict"] == "ADMISSIBLE" or c["witness"].get("kind") not in ("ShapeNotInTheorem", "NotApplicable"):
                tag = f"case {c['case']}" if c["case"] else c["witness"].get("kind", "")
                lines.append(f"  {_set(c['arcs']):<10} {c['verdict']:<10} {tag}")
        lines.append(f"admissible: {_sets(report['admissible'])}")
        cc = report.get("crosscheck")
        if cc is not None:
            lines.append(f"oracle (input indices): {_sets(cc['oracle'])}  {'PASS' if cc['pass'] else 'FAIL'}")
    elif kind == "crosscheck":
        lines.append(f"scheme {report['scheme_name'] or '-'}")
        lines.append(f"  classifier: {_sets(report['classifier'])}")
        lines.append(f"  oracle:     {_sets(report['oracle'])}")
        lines.append(f"  diff:       {_sets(report['diff'])}")
        lines.append("PASS" if report["pass"] else "FAIL")
    elif kind == "oracle":
        lines.append(f"scheme {report['scheme_name'] or '-'}")
        lines.append(f"admissible: {_sets(report['admissible'])}")
    elif kind == "enumeration":
        for row in report["schemes"]:
            lines.append(f"{row['name']:<16} n={row['n']:<3} d={row['d']:<3} nonsym_pairs={row['nonsymmetric_pairs']}")
        lines.append(f"{report['count']} schemes")
    elif kind == "scheme":
        sm = report["summary"]
        lines.append(f"{sm['name']}  n={sm['n']}  d={sm['d']}  valencies={sm['valencies']}  star={sm['star']}")
    elif kind == "scheme_analysis":
        lines.append(f"{report['name'] or '-'}  n={report['n']}  d={report['d']}  valencies={report['valencies']}")
        lines.append(f"  star={report['star']}  commutative={report['commutative']}  "
                     f"nonsymmetric pairs={report['nonsymmetric_pairs']}")
        for row in report["p_polynomial"]:
            lines.append(f"  P-polynomial via R_{row['generator']}: {row['ordering']}")
        for row in report["closures"]:
            lines.append(f"  <R_{row['generator']}> = {row['closed_subset']}  fiber size {row['fiber_size']}")
        for row in report["wreath_decompositions"]:
            lines.append(f"  wreath: inner class R_{row['a']} on {row['fiber_size']} points, quotient d={row['quotient_d']}")
    elif kind == "digraph_analysis":
        lines.append(f"digraph n={report['n']} arcs={report['arcs']} diameter={report['diameter']} "
                     f"girth={report['girth']} strongly_connected={report['strongly_connected']}")
        wd = report["wdrd"]
        lines.append(f"  {wd['status']}")
        for c in wd["cells"]:
            lines.append(f"    R_{c['index']} = cell {tuple(c['two_way'])}  valency {c['valency']}")
        dr = report["distance_regular"]
        if dr:
            lines.append(f"  distance-regular, {dr['type']} type, d={dr['diameter']}, g={dr['girth']}")
    elif kind == "error":
        where = f" at {report['pointer']}" if report.get("pointer") else ""
        lines.append(f"error {report['error']}{where}: {report['message']}")
    else:
        lines.append(io.dumps(report).rstrip())
    return "\n".join(lines) + "\n"


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return io.dumps({"schema_version": io.SCHEMA_VERSION, **report})
    return _text(report)


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cmd = parse(argv)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_INPUT
    report, status = execute(cmd)
    sys.stdout.write(render(report, cmd.format))
    return status


if __name__ == "__main__":
    raise SystemExit(main())
