"""Weakly distance-regular and distance-regular digraph recognition."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .closure import closure, fibers_of
from .digraph import (
    UNREACHABLE,
    Digraph,
    arc_union,
    complete_graph,
    distances,
    empty_graph,
    lex_decompose,
    profile,
    quotient_digraph,
    two_way_partition,
)
from .errors import (
    AxiomError,
    DecompositionFailure,
    NotStronglyConnected,
    PreconditionViolated,
    SizeMismatch,
)
from .scheme import Scheme, relation_profile, scheme_from_labels


@dataclass(frozen=True, eq=False)
class AttachedScheme:
    scheme: Scheme
    cell_labels: dict[int, tuple[int, int]]

    def to_dict(self) -> dict:
        return {
            "d": self.scheme.d,
            "cells": [
                {"index": i, "two_way": list(lab), "valency": self.scheme.k[i]}
                for i, lab in sorted(self.cell_labels.items())
            ],
        }


@dataclass(frozen=True, eq=False)
class WdrdReport:
    """Outcome of two-way-distance recognition; ``witness`` explains a failure."""

    attached: AttachedScheme | None
    witness: dict | None = None
    diameter: int | None = None

    @property
    def is_wdrd(self) -> bool:
        return self.attached is not None

    def to_dict(self) -> dict:
        cells = [] if self.attached is None else self.attached.to_dict()["cells"]
        return {
            "kind": "wdrd",
            "status": "WDRD" if self.is_wdrd else "NOT_WDRD",
            "witnesses": [] if self.witness is None else [self.witness],
            "cells": cells,
            "type": None,
            "diameter": self.diameter,
        }


def recognize_wdrd(g: Digraph) -> WdrdReport:
    """Build the two-way distance configuration and validate it as a scheme.

    Cells are ordered lexicographically by their (a, b) label, so relation 0
    is the (0, 0) diagonal.
    """
    dist = distances(g)
    if (dist == UNREACHABLE).any():
        return WdrdReport(None, NotStronglyConnected("digraph is not strongly connected").to_dict())
    part = two_way_partition(g, dist)
    try:
        s = scheme_from_labels(part.labels, d=len(part.keys) - 1, name="attached")
    except AxiomError as exc:
        return WdrdReport(None, exc.to_dict(), int(dist.max()))
    labels = {i: key for i, key in enumerate(part.keys)}
    return WdrdReport(AttachedScheme(s, labels), None, int(dist.max()))


def attached_scheme(g: Digraph) -> AttachedScheme | None:
    return recognize_wdrd(g).attached


def same_partition(a: np.ndarray, b: np.ndarray) -> bool:
    """True iff two label matrices induce the same partition (labels ignored)."""
    if a.shape != b.shape:
        return False
    pairs = np.unique(np.stack([a.ravel(), b.ravel()]), axis=1)
    return pairs.shape[1] == len(np.unique(a)) == len(np.unique(b))


def is_wdrd_with_scheme(g: Digraph, s: Scheme) -> bool:
    if g.n != s.n:
        raise SizeMismatch(f"digraph has {g.n} points, scheme has {s.n}")
    att = attached_scheme(g)
    return att is not None and same_partition(att.scheme.labels, s.labels)


# ---------------------------------------------------------------------------
# distance-regular digraphs
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DistanceRegularResult:
    scheme: Scheme
    type: Literal["short", "long"]
    diameter: int
    girth: int
    decomposition: tuple[Digraph, Digraph] | None = None
    blocks: tuple[tuple[int, ...], ...] | None = None

    def to_dict(self) -> dict:
        out = {
            "kind": "distance_regular",
            "status": "DISTANCE_REGULAR",
            "type": self.type,
            "diameter": self.diameter,
            "girth": self.girth,
            "witnesses": [],
            "cells": [],
        }
        if self.decomposition is not None:
            outer, inner = self.decomposition
            out["decomposition"] = {"outer_n": outer.n, "outer_arcs": outer.arc_count, "inner_n": inner.n}
        return out


def distance_regular_test(g: Digraph) -> DistanceRegularResult | None:
    """Recognise a distance-regular digraph and check the diameter/girth dichotomy.

    Returns None unless the one-way distance partition is a non-symmetric
    scheme.  Raises :class:`DecompositionFailure` if the diameter/girth
    relation or the long-type lexicographic decomposition does not hold.
    """
    prof = profile(g)
    if not prof.strongly_connected or g.n < 2:
        return None
    try:
        s = scheme_from_labels(prof.dist, d=prof.diameter, name="distance")
    except AxiomError:
        return None
    if all(s.star[i] == i for i in range(s.d + 1)):
        return None
    d, girth = prof.diameter, prof.girth
    if d == girth - 1:
        return DistanceRegularResult(s, "short", d, girth)
    if d != girth:
        raise DecompositionFailure(f"diameter {d} and girth {girth} violate d in (g-1, g)")

    blocks = fibers_of(s, {0, d})
    sizes = {len(b) for b in blocks}
    flat = sorted(v for b in blocks for v in b)
    if len(sizes) != 1 or flat != list(range(g.n)):
        raise DecompositionFailure("distance-d relation plus identity is not an equivalence")
    parts = lex_decompose(g, blocks)
    if parts is None:
        raise DecompositionFailure("long-type digraph is not a lexicographic product over its fibers")
    outer, inner = parts
    if inner.arc_count:
        raise DecompositionFailure("inner factor of a long-type digraph has arcs")
    sub = distance_regular_test(outer)
    if sub is None or sub.type != "short" or sub.diameter != girth - 1:
        raise DecompositionFailure("outer factor is not a short distance-regular digraph of diameter g-1")
    return DistanceRegularResult(s, "long", d, girth, parts, blocks)


# ---------------------------------------------------------------------------
# lexicographic structure over a 1-class closed subset
# ---------------------------------------------------------------------------

@dataclass
class Lemma24Report:
    a: int
    l: int
    fiber_size: int
    decomposes: bool
    inner_kind: str
    quotient: Digraph | None
    delta_is_wdrd_with_scheme: bool
    quotient_is_wdrd: bool | None
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        if not self.decomposes:
            return False
        return not self.delta_is_wdrd_with_scheme or bool(self.quotient_is_wdrd)

    def to_dict(self) -> dict:
        return {
            "kind": "lemma24",
            "a": self.a,
            "l": self.l,
            "fiber_size": self.fiber_size,
            "decomposes": self.decomposes,
            "inner": self.inner_kind,
            "quotient_arcs": None if self.quotient is None else self.quotient.arc_list(),
            "delta_is_wdrd_with_scheme": self.delta_is_wdrd_with_scheme,
            "quotient_is_wdrd": self.quotient_is_wdrd,
            "notes": list(self.notes),
            "status": "PASS" if self.passed else "FAIL",
        }


def lemma24_verify(s: Scheme, a: int, l: int) -> Lemma24Report:
    """Check the lexicographic splitting of (X, R_1 u R_l) over the fibers of {0, a}.

    With l == 1 the inner factor must be the empty graph on k_a + 1 points,
    with l == a the complete graph.  When the digraph is weakly
    distance-regular with ``s`` attached, its quotient must be too.
    """
    if l not in (1, a):
        raise PreconditionViolated("l in {1, a}", f"l={l}, a={a}")
    if not relation_profile(s).commutative:
        raise PreconditionViolated("commutative")
    if s.d < 2 or s.star[1] != 2:
        raise PreconditionViolated("R_1^T = R_2")
    if not 3 <= a <= s.d:
        raise PreconditionViolated("3 <= a <= d", f"a={a}, d={s.d}")
    F = closure(s, {a})
    if F.indices != {0, a}:
        raise PreconditionViolated("<R_a> = {R_0, R_a}", f"closure is {sorted(F.indices)}")
    if s.p[1, s.star[1], a] != s.k[1]:
        raise PreconditionViolated(
            "p[1][1*][a] = k_1", f"p[1][{s.star[1]}][{a}] = {int(s.p[1, s.star[1], a])}, k_1 = {s.k[1]}"
        )

    delta = arc_union(s, {1, l})
    m = F.fiber_size
    expected_inner = empty_graph(m) if l == 1 else complete_graph(m)
    parts = lex_decompose(delta, F.fibers)
    notes = []
    decomposes = parts is not None and parts[1].same_as(expected_inner)
    if parts is None:
        notes.append("digraph is not a lexicographic product over the fibers")
    elif not decomposes:
        notes.append("inner factor differs from the expected empty/complete graph")
    quotient = quotient_digraph(delta, F.fibers)
    if quotient.n == 2 and quotient.arc_count == 2:
        notes.append("quotient is a digon on two fibers")
    on_scheme = is_wdrd_with_scheme(delta, s)
    quotient_ok = attached_scheme(quotient) is not None if on_scheme else None
    return Lemma24Report(
        a=a,
        l=l,
        fiber_size=m,
        decomposes=decomposes,
        inner_kind="empty" if l == 1 else "complete",
        quotient=quotient,
        delta_is_wdrd_with_scheme=on_scheme,
        quotient_is_wdrd=quotient_ok,
        notes=notes,
    )
