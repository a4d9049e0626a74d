"""JSON documents for schemes and digraphs (schema_version 1)."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .digraph import Digraph, arc_union
from .errors import InputError
from .generators import CirculantSpec, circulant_scheme
from .scheme import Scheme, build_scheme

SCHEMA_VERSION = 1


def dumps(obj: Any) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _load_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError("", f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError("", f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc


def _require(cond: bool, pointer: str, message: str) -> None:
    if not cond:
        raise InputError(pointer, message)


def _int(value: Any, pointer: str) -> int:
    _require(isinstance(value, int) and not isinstance(value, bool), pointer, "expected an integer")
    return value


def _version(doc: dict) -> None:
    _require("schema_version" in doc, "/schema_version", "missing")
    _require(doc["schema_version"] == SCHEMA_VERSION, "/schema_version", f"expected {SCHEMA_VERSION}")


def _pair(value: Any, pointer: str, n: int) -> tuple[int, int]:
    _require(isinstance(value, list) and len(value) == 2, pointer, "expected [x, y]")
    x, y = _int(value[0], pointer + "/0"), _int(value[1], pointer + "/1")
    _require(0 <= x < n, pointer + "/0", f"point outside 0..{n - 1}")
    _require(0 <= y < n, pointer + "/1", f"point outside 0..{n - 1}")
    return x, y


def scheme_from_doc(doc: Any) -> Scheme:
    """Parse a scheme document; axiom failures propagate as AxiomError."""
    _require(isinstance(doc, dict), "", "expected a JSON object")
    _version(doc)
    name = doc.get("name", "")
    _require(isinstance(name, str), "/name", "expected a string")
    provenance = doc.get("provenance") or {}
    _require(isinstance(provenance, dict), "/provenance", "expected an object")

    if "circulant" in doc:
        circ = doc["circulant"]
        _require(isinstance(circ, dict), "/circulant", "expected an object")
        n = _int(circ.get("modulus"), "/circulant/modulus")
        classes = circ.get("classes")
        _require(isinstance(classes, list), "/circulant/classes", "expected a list of lists")
        for c, cls in enumerate(classes):
            _require(isinstance(cls, list), f"/circulant/classes/{c}", "expected a list")
            for t, v in enumerate(cls):
                _int(v, f"/circulant/classes/{c}/{t}")
        try:
            spec = CirculantSpec(n, tuple(tuple(c) for c in classes))
        except ValueError as exc:
            raise InputError("/circulant/classes", str(exc)) from exc
        s = circulant_scheme(spec, name=name or None, strict=True)
        return s

    n = _int(doc.get("size"), "/size")
    _require(n >= 1, "/size", "must be positive")
    rels = doc.get("relations")
    _require(isinstance(rels, list), "/relations", "expected a list")
    pairs: list[list[tuple[int, int]]] = []
    for r, rel in enumerate(rels):
        ptr = f"/relations/{r}"
        _require(isinstance(rel, dict), ptr, "expected an object")
        idx = _int(rel.get("index"), ptr + "/index")
        _require(idx == r + 1, ptr + "/index", f"expected index {r + 1} (relations are listed 1..d in order)")
        plist = rel.get("pairs")
        _require(isinstance(plist, list), ptr + "/pairs", "expected a list of pairs")
        pairs.append([_pair(v, f"{ptr}/pairs/{t}", n) for t, v in enumerate(plist)])
    return build_scheme(n, pairs, name=name, provenance=provenance)


def load_scheme(path: str | Path) -> Scheme:
    return scheme_from_doc(_load_json(path))


def scheme_to_doc(s: Scheme) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "name": s.name,
        "size": s.n,
        "relations": [{"index": i, "pairs": [list(p) for p in s.pairs(i)]} for i in range(1, s.d + 1)],
    }
    if s.provenance:
        doc["provenance"] = _jsonable(s.provenance)
    return doc


def _jsonable(obj: Any) -> Any:
    return json.loads(json.dumps(obj, default=lambda o: o.tolist() if hasattr(o, "tolist") else str(o)))


def save_scheme(s: Scheme, path: str | Path) -> None:
    Path(path).write_text(dumps(scheme_to_doc(s)), encoding="utf-8")


def is_digraph_doc(doc: Any) -> bool:
    return isinstance(doc, dict) and ("arcs" in doc or "arc_relations" in doc)


def digraph_from_doc(doc: Any, base: Path | None = None) -> Digraph:
    _require(isinstance(doc, dict), "", "expected a JSON object")
    if "scheme" in doc:
        ref = doc["scheme"]
        _require(isinstance(ref, str), "/scheme", "expected a path")
        path = Path(ref) if base is None or Path(ref).is_absolute() else base / ref
        s = load_scheme(path)
        idxs = doc.get("arc_relations")
        _require(isinstance(idxs, list) and idxs, "/arc_relations", "expected a nonempty list")
        for t, v in enumerate(idxs):
            _int(v, f"/arc_relations/{t}")
            _require(1 <= v <= s.d, f"/arc_relations/{t}", f"relation outside 1..{s.d}")
        return arc_union(s, idxs)
    _version(doc)
    n = _int(doc.get("size"), "/size")
    _require(n >= 1, "/size", "must be positive")
    arcs = doc.get("arcs")
    _require(isinstance(arcs, list), "/arcs", "expected a list")
    parsed = []
    for t, v in enumerate(arcs):
        x, y = _pair(v, f"/arcs/{t}", n)
        _require(x != y, f"/arcs/{t}", "loops are not allowed")
        parsed.append((x, y))
    return Digraph.from_arcs(n, parsed)


def load_digraph(path: str | Path) -> Digraph:
    return digraph_from_doc(_load_json(path), Path(path).parent)


def digraph_to_doc(g: Digraph) -> dict:
    return {"schema_version": SCHEMA_VERSION, "size": g.n, "arcs": [list(a) for a in g.arc_list()]}


def load_document(path: str | Path) -> Scheme | Digraph:
    doc = _load_json(path)
    if is_digraph_doc(doc):
        return digraph_from_doc(doc, Path(path).parent)
    return scheme_from_doc(doc)
