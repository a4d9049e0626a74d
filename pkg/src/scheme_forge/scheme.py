"""Association schemes: construction, intersection numbers and identity checks.

A scheme on ``n`` points is stored as an integer label matrix: ``labels[x, y]``
is the index of the relation containing ``(x, y)``.  Relation 0 is the
diagonal.  Boolean incidence tables are derived from the labels on demand.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    IdentityViolation,
    NonConstantIntersection,
    NotPartition,
    NotTransposeClosed,
    SchemeTooLarge,
)

MAX_POINTS = 2048


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Scheme:
    """A validated association scheme.

    Instances are only produced by :func:`build_scheme` and
    :func:`scheme_from_labels`, so every invariant has been checked by direct
    counting.  Arrays are read-only.
    """

    n: int
    d: int
    labels: np.ndarray
    p: np.ndarray
    k: tuple[int, ...]
    star: tuple[int, ...]
    name: str = ""
    provenance: Mapping = field(default_factory=dict)

    @cached_property
    def relations(self) -> tuple[np.ndarray, ...]:
        return tuple(_frozen(self.labels == i) for i in range(self.d + 1))

    def relation(self, i: int) -> np.ndarray:
        return self.relations[i]

    def pairs(self, i: int) -> list[tuple[int, int]]:
        xs, ys = np.nonzero(self.labels == i)
        return [(int(x), int(y)) for x, y in zip(xs, ys)]

    def neighbors(self, i: int, x: int) -> np.ndarray:
        """R_i(x) as a sorted index array."""
        return np.flatnonzero(self.labels[x] == i)

    def is_symmetric(self, i: int) -> bool:
        return self.star[i] == i

    def same_as(self, other: "Scheme") -> bool:
        """Identical labelled relations (and therefore identical tensors)."""
        return (
            self.n == other.n
            and self.d == other.d
            and np.array_equal(self.labels, other.labels)
            and np.array_equal(self.p, other.p)
        )

    def __repr__(self) -> str:
        tag = f" {self.name!r}" if self.name else ""
        return f"<Scheme{tag} n={self.n} d={self.d} k={list(self.k)}>"


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

def build_scheme(
    n: int,
    rels: Sequence[Iterable[tuple[int, int]]],
    *,
    name: str = "",
    provenance: Mapping | None = None,
) -> Scheme:
    """Build a scheme from off-diagonal relations ``rels[0]`` = R_1, ... .

    The diagonal is implicit.  Raises :class:`NotPartition`,
    :class:`NotTransposeClosed` or :class:`NonConstantIntersection` when the
    input is not an association scheme.
    """
    if n < 1:
        raise NotPartition("a scheme needs at least one point")
    if n > MAX_POINTS:
        raise SchemeTooLarge(f"n={n} exceeds the dense-table limit {MAX_POINTS}")
    labels = np.zeros((n, n), dtype=np.int64)
    seen = np.eye(n, dtype=bool)
    for idx, rel in enumerate(rels, start=1):
        for pair in rel:
            x, y = (int(v) for v in pair)
            if not (0 <= x < n and 0 <= y < n):
                raise NotPartition(f"pair {(x, y)} of relation {idx} is outside 0..{n - 1}")
            if x == y:
                raise NotPartition(f"pair {(x, y)} of relation {idx} lies on the diagonal")
            if seen[x, y]:
                raise NotPartition(f"pair {(x, y)} appears more than once (relation {idx})")
            seen[x, y] = True
            labels[x, y] = idx
    if not seen.all():
        xs, ys = np.nonzero(~seen)
        raise NotPartition(f"pair {(int(xs[0]), int(ys[0]))} is not covered by any relation")
    return scheme_from_labels(labels, d=len(rels), name=name, provenance=provenance)


def scheme_from_labels(
    labels: np.ndarray,
    *,
    d: int | None = None,
    name: str = "",
    provenance: Mapping | None = None,
) -> Scheme:
    """Validate a label matrix as a scheme and compute its tensor."""
    labels = np.array(labels, dtype=np.int64, copy=True)
    if labels.ndim != 2 or labels.shape[0] != labels.shape[1]:
        raise NotPartition("label matrix must be square")
    n = labels.shape[0]
    if n < 1:
        raise NotPartition("a scheme needs at least one point")
    if n > MAX_POINTS:
        raise SchemeTooLarge(f"n={n} exceeds the dense-table limit {MAX_POINTS}")
    if d is None:
        d = int(labels.max())
    diag = np.eye(n, dtype=bool)
    if np.any(labels[diag] != 0):
        raise NotPartition("relation 0 must be exactly the diagonal")
    off = labels[~diag]
    if off.size and (off.min() < 1 or off.max() > d):
        raise NotPartition(f"off-diagonal labels must lie in 1..{d}")
    sizes = np.bincount(labels.ravel(), minlength=d + 1)
    empty = [i for i in range(1, d + 1) if sizes[i] == 0]
    if empty:
        raise NotPartition(f"relation {empty[0]} is empty")

    star = _transpose_map(labels, d)
    p = _intersection_tensor(labels, d, star)
    k = tuple(int(p[i, star[i], 0]) for i in range(d + 1))
    return Scheme(
        n=n,
        d=d,
        labels=_frozen(labels),
        p=_frozen(p),
        k=k,
        star=star,
        name=name,
        provenance=dict(provenance or {}),
    )


def _transpose_map(labels: np.ndarray, d: int) -> tuple[int, ...]:
    star = [-1] * (d + 1)
    flat, flat_t = labels.ravel(), labels.T.ravel()
    for i in range(d + 1):
        images = np.unique(flat_t[flat == i])
        if images.size != 1:
            raise NotTransposeClosed(i, f"transpose of relation {i} meets relations {images.tolist()}")
        star[i] = int(images[0])
    for i in range(d + 1):
        if star[star[i]] != i:
            raise NotTransposeClosed(i)
    return tuple(star)


def _intersection_tensor(labels: np.ndarray, d: int, star: Sequence[int]) -> np.ndarray:
    # (A_i A_j)[x, y] = |R_i(x) & R_{j*}(y)|; float matmul is exact for n <= 2**53.
    n = labels.shape[0]
    tables = np.stack([(labels == i) for i in range(d + 1)]).astype(np.float64)
    reps = []
    for h in range(d + 1):
        xs, ys = np.nonzero(labels == h)
        reps.append((int(xs[0]), int(ys[0])))
    rx = np.array([r[0] for r in reps])
    ry = np.array([r[1] for r in reps])

    p = np.zeros((d + 1, d + 1, d + 1), dtype=np.int64)
    for i in range(d + 1):
        left = tables[i]
        for j in range(d + 1):
            counts = np.rint(left @ tables[j]).astype(np.int64)
            p_ij = counts[rx, ry]
            bad = counts != p_ij[labels]
            if bad.any():
                xs, ys = np.nonzero(bad)
                x, y = int(xs[0]), int(ys[0])
                h = int(labels[x, y])
                raise NonConstantIntersection(
                    i, j, h, [reps[h], (x, y)], [int(p_ij[h]), int(counts[x, y])]
                )
            p[i, j] = p_ij
    if n and p.max(initial=0) > n:
        raise AssertionError("intersection number exceeds point count")
    return p


def relabel(s: Scheme, order: Sequence[int], *, name: str | None = None) -> Scheme:
    """Reindex relations: new relation ``t`` is old relation ``order[t]``."""
    order = [int(v) for v in order]
    if sorted(order) != list(range(s.d + 1)) or order[0] != 0:
        raise ValueError(f"{order} is not a relation permutation fixing 0")
    inverse = np.empty(s.d + 1, dtype=np.int64)
    inverse[order] = np.arange(s.d + 1)
    prov = {"construction": "relabel", "order": order, "source": s.name}
    return scheme_from_labels(inverse[s.labels], d=s.d, name=s.name if name is None else name, provenance=prov)


def permute_points(s: Scheme, perm: Sequence[int]) -> Scheme:
    """Scheme whose point ``t`` is old point ``perm[t]``."""
    perm = np.asarray(perm, dtype=np.int64)
    if sorted(perm.tolist()) != list(range(s.n)):
        raise ValueError("not a permutation of the points")
    return scheme_from_labels(s.labels[np.ix_(perm, perm)], d=s.d, name=s.name)


# ---------------------------------------------------------------------------
# identities
# ---------------------------------------------------------------------------

@dataclass
class IdentityReport:
    """Number of index tuples checked per identity; all passed."""

    scheme: str
    n: int
    d: int
    checked: dict[str, int]

    @property
    def passed(self) -> bool:
        return True

    def to_dict(self) -> dict:
        return {
            "kind": "identities",
            "scheme": self.scheme,
            "n": self.n,
            "d": self.d,
            "identities": [
                {"id": key, "instances": count, "status": "PASS"}
                for key, count in self.checked.items()
            ],
            "status": "PASS",
        }


IDENTITY_LABELS = {
    "unit": "p[i][0][h] = p[0][i][h] = delta(i,h)",
    "valency": "k_i = p[i][i*][0] = k_i*, sum k = n",
    "(1)": "k_i k_j = sum_h p[i][j][h] k_h",
    "(2)": "p[i][j][h] k_h = p[h][j*][i] k_i = p[i*][h][j] k_j",
    "(3)": "sum_j p[i][j][h] = k_i",
    "(4)": "sum_r p[e][l][r] p[m][r][h] = sum_t p[m][e][t] p[t][l][h]",
    "product": "A_i A_j = sum_h p[i][j][h] A_h",
}


def _first_violation(mask: np.ndarray) -> tuple[int, ...]:
    return tuple(int(v) for v in np.argwhere(mask)[0])


def verify_identities(s: Scheme) -> IdentityReport:
    """Check every standard intersection-number identity exactly.

    Raises :class:`IdentityViolation` naming the identity and the first
    failing index tuple.
    """
    p = np.asarray(s.p, dtype=np.int64)
    D = s.d + 1
    k = np.asarray(s.k, dtype=np.int64)
    star = np.asarray(s.star, dtype=np.int64)
    delta = np.eye(D, dtype=np.int64)
    checked: dict[str, int] = {}

    bad = (p[:, 0, :] != delta) | (p[0, :, :] != delta)
    if bad.any():
        raise IdentityViolation("unit", _first_violation(bad))
    checked["unit"] = 2 * D * D

    diag_k = p[np.arange(D), star, 0]
    bad = (diag_k != k) | (k[star] != k)
    if bad.any():
        raise IdentityViolation("valency", _first_violation(bad))
    if int(k.sum()) != s.n:
        raise IdentityViolation("valency", (s.n,))
    checked["valency"] = D + 1

    lhs = np.outer(k, k)
    rhs = np.einsum("ijh,h->ij", p, k)
    bad = lhs != rhs
    if bad.any():
        raise IdentityViolation("(1)", _first_violation(bad))
    checked["(1)"] = D * D

    # index order in the arrays below is (i, j, h)
    a = p * k[None, None, :]
    b = np.transpose(p[:, star, :], (2, 1, 0)) * k[:, None, None]  # p[h][j*][i] k_i
    c = np.transpose(p[star, :, :], (0, 2, 1)) * k[None, :, None]  # p[i*][h][j] k_j
    bad = (a != b) | (a != c)
    if bad.any():
        raise IdentityViolation("(2)", _first_violation(bad))
    checked["(2)"] = D ** 3

    bad = p.sum(axis=1) != k[:, None]
    if bad.any():
        raise IdentityViolation("(3)", _first_violation(bad))
    checked["(3)"] = D * D

    # (e, l, m, h)
    lhs4 = np.einsum("elr,mrh->elmh", p, p)
    rhs4 = np.einsum("met,tlh->elmh", p, p)
    bad = lhs4 != rhs4
    if bad.any():
        raise IdentityViolation("(4)", _first_violation(bad))
    checked["(4)"] = D ** 4

    tables = np.stack(s.relations).astype(np.float64)
    for i, j in product(range(D), repeat=2):
        prod_ij = np.rint(tables[i] @ tables[j]).astype(np.int64)
        expected = p[i, j][s.labels]
        if not np.array_equal(prod_ij, expected):
            raise IdentityViolation("product", (i, j))
    checked["product"] = D * D

    return IdentityReport(scheme=s.name, n=s.n, d=s.d, checked=checked)


# ---------------------------------------------------------------------------
# relation profile
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RelationProfile:
    star: tuple[int, ...]
    symmetric: tuple[bool, ...]
    nonsymmetric_pairs: tuple[tuple[int, int], ...]
    commutative: bool

    @property
    def nonsymmetric_pair_count(self) -> int:
        return len(self.nonsymmetric_pairs)

    def to_dict(self) -> dict:
        return {
            "star": list(self.star),
            "symmetric": list(self.symmetric),
            "nonsymmetric_pairs": [list(pr) for pr in self.nonsymmetric_pairs],
            "commutative": self.commutative,
        }


def relation_profile(s: Scheme) -> RelationProfile:
    pairs = tuple((i, s.star[i]) for i in range(1, s.d + 1) if i < s.star[i])
    commutative = bool(np.array_equal(s.p, np.transpose(s.p, (1, 0, 2))))
    return RelationProfile(
        star=s.star,
        symmetric=tuple(s.star[i] == i for i in range(s.d + 1)),
        nonsymmetric_pairs=pairs,
        commutative=commutative,
    )


def is_commutative(s: Scheme) -> bool:
    return relation_profile(s).commutative


def corrupt_tensor(s: Scheme, i: int, j: int, h: int, delta: int = 1) -> Scheme:
    """Copy of ``s`` with one intersection number shifted (test negative control)."""
    p = np.array(s.p, copy=True)
    p[i, j, h] += delta
    return Scheme(n=s.n, d=s.d, labels=s.labels, p=_frozen(p), k=s.k, star=s.star, name=s.name + "~corrupt")
