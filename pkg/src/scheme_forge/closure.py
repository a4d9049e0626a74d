"""Complex products, closed subsets, subschemes, quotients and wreath products."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import AxiomError, IndexOutOfRange, InternalError, NotClosed, NotNested
from .scheme import Scheme, scheme_from_labels


def _indices(s: Scheme, idxs: Iterable[int], *, allow_zero: bool = True) -> frozenset[int]:
    out = frozenset(int(i) for i in idxs)
    if not out:
        raise IndexOutOfRange("index set must be nonempty")
    low = 0 if allow_zero else 1
    for i in out:
        if not low <= i <= s.d:
            raise IndexOutOfRange(f"relation {i} outside {low}..{s.d}")
    return out


def complex_product(s: Scheme, E: Iterable[int], F: Iterable[int]) -> frozenset[int]:
    """EF: every h with p[i][j][h] > 0 for some i in E, j in F."""
    E, F = _indices(s, E), _indices(s, F)
    block = s.p[np.ix_(sorted(E), sorted(F))]
    return frozenset(int(h) for h in np.flatnonzero(block.sum(axis=(0, 1))))


@dataclass(frozen=True)
class ClosedSubset:
    indices: frozenset[int]
    fibers: tuple[tuple[int, ...], ...]

    @property
    def fiber_size(self) -> int:
        return len(self.fibers[0])

    def fiber_of(self, x: int) -> tuple[int, ...]:
        for f in self.fibers:
            if x in f:
                return f
        raise IndexOutOfRange(f"point {x} is in no fiber")

    def to_dict(self) -> dict:
        return {"indices": sorted(self.indices), "fibers": [list(f) for f in self.fibers]}


def is_closed(s: Scheme, idxs: Iterable[int]) -> bool:
    F = frozenset(int(i) for i in idxs)
    if 0 not in F:
        return False
    if any(s.star[i] not in F for i in F):
        return False
    stars = {s.star[i] for i in F}
    return complex_product(s, stars, F) <= F


def fibers_of(s: Scheme, idxs: Iterable[int]) -> tuple[tuple[int, ...], ...]:
    member = np.isin(s.labels, sorted(set(idxs)))
    seen: set[int] = set()
    out = []
    for x in range(s.n):
        if x in seen:
            continue
        f = tuple(int(y) for y in np.flatnonzero(member[x]))
        seen.update(f)
        out.append(f)
    return tuple(out)


def closed_subset(s: Scheme, idxs: Iterable[int]) -> ClosedSubset:
    """Wrap an index set known to be closed; raises :class:`NotClosed` otherwise."""
    F = _indices(s, idxs)
    if not is_closed(s, F):
        raise NotClosed(f"{sorted(F)} is not a closed subset")
    return ClosedSubset(F, fibers_of(s, F))


def closure(s: Scheme, K: Iterable[int]) -> ClosedSubset:
    """Smallest closed subset containing ``K``."""
    cur = set(_indices(s, K)) | {0}
    while True:
        grown = cur | {s.star[i] for i in cur}
        grown |= complex_product(s, grown, grown)
        if grown == cur:
            break
        cur = grown
    return ClosedSubset(frozenset(cur), fibers_of(s, cur))


def _as_closed(s: Scheme, F) -> ClosedSubset:
    if isinstance(F, ClosedSubset):
        if not is_closed(s, F.indices):
            raise NotClosed(f"{sorted(F.indices)} is not a closed subset")
        return F
    return closed_subset(s, F)


def subscheme(s: Scheme, F, x: int) -> Scheme:
    """The scheme induced on the fiber ``F(x)``.

    Relation indices are renumbered densely in increasing original order;
    ``provenance["index_map"]`` maps original -> new index.
    """
    F = _as_closed(s, F)
    points = list(F.fiber_of(int(x)))
    order = sorted(F.indices)
    dense = {orig: new for new, orig in enumerate(order)}
    lookup = np.full(s.d + 1, -1, dtype=np.int64)
    for orig, new in dense.items():
        lookup[orig] = new
    labels = lookup[s.labels[np.ix_(points, points)]]
    prov = {
        "construction": "subscheme",
        "source": s.name,
        "closed_subset": order,
        "base_point": int(x),
        "points": points,
        "index_map": {str(k): v for k, v in dense.items()},
    }
    try:
        return scheme_from_labels(labels, d=len(order) - 1, name=f"{s.name}|F({x})", provenance=prov)
    except AxiomError as exc:
        raise InternalError(f"subscheme failed validation: {exc}") from exc


def quotient_scheme(s: Scheme, F) -> Scheme:
    """The scheme on the fibers of ``F``.

    Quotient relation ``t`` is the set of fiber pairs met by original relation
    ``provenance["representatives"][t]``; ``provenance["index_map"]`` sends
    each original index to its quotient class.
    """
    F = _as_closed(s, F)
    where = np.empty(s.n, dtype=np.int64)
    for b, fiber in enumerate(F.fibers):
        where[list(fiber)] = b
    m = len(F.fibers)
    # block_rel[i] = fiber pairs (B, C) containing a pair of R_i
    block_rel = np.zeros((s.d + 1, m, m), dtype=bool)
    xs, ys = np.indices((s.n, s.n))
    block_rel[s.labels.ravel(), where[xs.ravel()], where[ys.ravel()]] = True

    classes: list[np.ndarray] = []
    reps: list[int] = []
    index_map: dict[int, int] = {}
    for i in range(s.d + 1):
        for t, c in enumerate(classes):
            if np.array_equal(c, block_rel[i]):
                index_map[i] = t
                break
        else:
            index_map[i] = len(classes)
            classes.append(block_rel[i])
            reps.append(i)
    labels = np.full((m, m), -1, dtype=np.int64)
    for t, c in enumerate(classes):
        if (labels[c] != -1).any():
            raise InternalError("quotient relations overlap")
        labels[c] = t
    prov = {
        "construction": "quotient",
        "source": s.name,
        "closed_subset": sorted(F.indices),
        "representatives": reps,
        "index_map": {str(k): v for k, v in index_map.items()},
    }
    try:
        return scheme_from_labels(labels, d=len(classes) - 1, name=f"{s.name}/F", provenance=prov)
    except AxiomError as exc:
        raise InternalError(f"quotient failed validation: {exc}") from exc


def wreath_product(inner: Scheme, outer: Scheme, *, name: str | None = None) -> Scheme:
    """Inner relations inside each fiber, outer relations between fibers.

    Point ``(x, y)`` (x in inner, y in outer) has index ``y * inner.n + x``,
    so fibers are contiguous.  Relations 1..d_inner come from ``inner``,
    relations d_inner+1.. from ``outer``.
    """
    a, b = inner.n, outer.n
    same = np.kron(np.eye(b, dtype=bool), np.ones((a, a), dtype=bool))
    in_lab = np.kron(np.ones((b, b), dtype=np.int64), inner.labels)
    out_lab = np.kron(outer.labels, np.ones((a, a), dtype=np.int64))
    labels = np.where(same, in_lab, inner.d + out_lab)
    prov = {"construction": "wreath", "inner": inner.name, "outer": outer.name}
    label = name if name is not None else f"wreath({inner.name},{outer.name})"
    try:
        return scheme_from_labels(labels, d=inner.d + outer.d, name=label, provenance=prov)
    except AxiomError as exc:
        raise InternalError(f"wreath product failed validation: {exc}") from exc


def _sum_tables(s: Scheme, idxs: Iterable[int]) -> np.ndarray:
    return np.isin(s.labels, sorted(idxs)).astype(np.float64)


def wedge_conditions(s: Scheme, K, F) -> bool:
    """Muzychuk's conditions for nested closed subsets K <= F.

    (a) for every j outside F, (sum_{i in K} A_i) A_j, A_j (sum A_i) and
    (sum k_i) A_j coincide; (b) K R_i = R_i K for every i.
    """
    K, F = _as_closed(s, K), _as_closed(s, F)
    if not K.indices <= F.indices:
        raise NotNested(f"{sorted(K.indices)} is not contained in {sorted(F.indices)}")
    sum_k = _sum_tables(s, K.indices)
    weight = sum(s.k[i] for i in K.indices)
    for j in range(s.d + 1):
        if j in F.indices:
            continue
        a_j = s.relation(j).astype(np.float64)
        target = weight * a_j
        if not np.array_equal(sum_k @ a_j, target) or not np.array_equal(a_j @ sum_k, target):
            return False
    for i in range(s.d + 1):
        if complex_product(s, K.indices, {i}) != complex_product(s, {i}, K.indices):
            return False
    return True


def one_class_scheme(m: int) -> Scheme:
    """The complete scheme on m points (0 classes when m == 1)."""
    labels = 1 - np.eye(m, dtype=np.int64)
    return scheme_from_labels(labels, d=1 if m > 1 else 0, name=f"one_class({m})")


@dataclass(frozen=True, eq=False)
class WreathDecomposition:
    """``s`` equals wreath(one_class(fiber_size), quotient) after regrouping points."""

    a: int
    closed: ClosedSubset
    quotient: Scheme
    point_order: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "a": self.a,
            "fiber_size": self.closed.fiber_size,
            "quotient_d": self.quotient.d,
            "quotient_index_map": dict(self.quotient.provenance.get("index_map", {})),
        }


def _verify_wreath(s: Scheme, a: int, F: ClosedSubset, q: Scheme) -> tuple[int, ...]:
    order = tuple(v for f in F.fibers for v in f)
    m = F.fiber_size
    rebuilt = wreath_product(one_class_scheme(m), q)
    qmap = {int(k): v for k, v in q.provenance["index_map"].items()}
    mapping = np.empty(s.d + 1, dtype=np.int64)
    for i in range(s.d + 1):
        mapping[i] = 0 if i == 0 else (1 if i == a else 1 + qmap[i])
    if len(set(mapping.tolist())) != s.d + 1:
        raise InternalError("outer relations merge in the quotient")
    relabelled = mapping[s.labels[np.ix_(order, order)]]
    if not np.array_equal(relabelled, rebuilt.labels):
        raise InternalError(f"wreath reconstruction failed for a={a}")
    return order


def wreath_decompositions(s: Scheme) -> list[WreathDecomposition]:
    """Every symmetric class ``a`` splitting ``s`` as a 1-class inner wreath factor.

    Needs closure({a}) = {0, a} and p[a][j][j] = k_a for every other j, i.e.
    each outer relation ignores the position inside a fiber.  Each hit is
    re-verified by rebuilding the wreath product.
    """
    out = []
    for a in range(1, s.d + 1):
        if s.star[a] != a:
            continue
        F = closure(s, {a})
        if F.indices != {0, a}:
            continue
        if any(s.p[a, j, j] != s.k[a] for j in range(1, s.d + 1) if j != a):
            continue
        q = quotient_scheme(s, F)
        order = _verify_wreath(s, a, F, q)
        out.append(WreathDecomposition(a=a, closed=F, quotient=q, point_order=order))
    return out


def wreath_decomposition(s: Scheme) -> WreathDecomposition | None:
    """The decomposition with the least inner class index, if any."""
    found = wreath_decompositions(s)
    return found[0] if found else None
