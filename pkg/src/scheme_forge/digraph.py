"""Digraphs, BFS distances, two-way distance partitions and products."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import IndexOutOfRange, NotAPartition, NotStronglyConnected, UnequalBlockSizes
from .scheme import Scheme

UNREACHABLE = -1


@dataclass(frozen=True, eq=False)
class Digraph:
    """Loopless digraph on points ``0..n-1`` stored as a boolean arc table."""

    n: int
    arcs: np.ndarray

    def __post_init__(self):
        arcs = np.array(self.arcs, dtype=bool, copy=True)
        if arcs.shape != (self.n, self.n):
            raise ValueError(f"arc table must be {self.n}x{self.n}")
        if arcs.diagonal().any():
            raise ValueError("digraphs are irreflexive; a loop was given")
        arcs.setflags(write=False)
        object.__setattr__(self, "arcs", arcs)

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> "Digraph":
        table = np.zeros((n, n), dtype=bool)
        for x, y in arcs:
            if not (0 <= x < n and 0 <= y < n):
                raise ValueError(f"arc {(x, y)} outside 0..{n - 1}")
            table[x, y] = True
        return cls(n, table)

    @cached_property
    def rows(self) -> tuple[int, ...]:
        """Out-neighbourhoods as int bitsets (bit y set iff x->y)."""
        out = []
        for row in self.arcs:
            bits = 0
            for y in np.flatnonzero(row):
                bits |= 1 << int(y)
            out.append(bits)
        return tuple(out)

    def arc_list(self) -> list[tuple[int, int]]:
        xs, ys = np.nonzero(self.arcs)
        return [(int(x), int(y)) for x, y in zip(xs, ys)]

    @property
    def arc_count(self) -> int:
        return int(self.arcs.sum())

    def is_graph(self) -> bool:
        return bool(np.array_equal(self.arcs, self.arcs.T))

    def same_as(self, other: "Digraph") -> bool:
        return self.n == other.n and bool(np.array_equal(self.arcs, other.arcs))

    def induced(self, vertices: Sequence[int]) -> "Digraph":
        idx = np.asarray(vertices, dtype=np.int64)
        return Digraph(len(idx), self.arcs[np.ix_(idx, idx)])

    def __repr__(self) -> str:
        return f"<Digraph n={self.n} arcs={self.arc_count}>"


# -- small named digraphs ----------------------------------------------------

def directed_cycle(n: int) -> Digraph:
    return Digraph.from_arcs(n, [(x, (x + 1) % n) for x in range(n)] if n > 1 else [])


def cycle_graph(n: int) -> Digraph:
    arcs = [(x, (x + 1) % n) for x in range(n)] + [((x + 1) % n, x) for x in range(n)]
    return Digraph.from_arcs(n, arcs)


def empty_graph(n: int) -> Digraph:
    return Digraph(n, np.zeros((n, n), dtype=bool))


def complete_graph(n: int) -> Digraph:
    return Digraph(n, ~np.eye(n, dtype=bool))


def cayley_digraph(n: int, connection: Iterable[int]) -> Digraph:
    """Arcs x -> x + c (mod n) for c in ``connection``."""
    conn = {c % n for c in connection}
    if 0 in conn:
        raise ValueError("0 in the connection set would create loops")
    return Digraph.from_arcs(n, [(x, (x + c) % n) for x in range(n) for c in sorted(conn)])


# ---------------------------------------------------------------------------

def arc_union(s: Scheme, idxs: Iterable[int]) -> Digraph:
    """Digraph whose arc set is the union of the chosen relations."""
    idxs = sorted(set(int(i) for i in idxs))
    if not idxs:
        raise IndexOutOfRange("arc index set must be nonempty")
    for i in idxs:
        if not 1 <= i <= s.d:
            raise IndexOutOfRange(f"relation {i} is not an arc relation (valid: 1..{s.d})")
    return Digraph(s.n, np.isin(s.labels, idxs))


def transpose(g: Digraph) -> Digraph:
    return Digraph(g.n, g.arcs.T)


@dataclass(frozen=True, eq=False)
class DigraphProfile:
    dist: np.ndarray
    strongly_connected: bool
    diameter: int
    girth: int | None

    def to_dict(self) -> dict:
        return {
            "strongly_connected": self.strongly_connected,
            "diameter": self.diameter,
            "girth": self.girth,
        }


def distances(g: Digraph) -> np.ndarray:
    """All-pairs BFS distances; unreachable pairs hold ``UNREACHABLE``."""
    n = g.n
    rows = g.rows
    dist = np.full((n, n), UNREACHABLE, dtype=np.int64)
    for src in range(n):
        seen = 1 << src
        frontier = seen
        level = 0
        while frontier:
            bits = frontier
            while bits:
                low = bits & -bits
                dist[src, low.bit_length() - 1] = level
                bits ^= low
            nxt = 0
            bits = frontier
            while bits:
                low = bits & -bits
                nxt |= rows[low.bit_length() - 1]
                bits ^= low
            frontier = nxt & ~seen
            seen |= frontier
            level += 1
    dist.setflags(write=False)
    return dist


def profile(g: Digraph) -> DigraphProfile:
    dist = distances(g)
    finite = dist[dist != UNREACHABLE]
    diameter = int(finite.max()) if finite.size else 0
    xs, ys = np.nonzero(g.arcs)
    back = dist[ys, xs]
    back = back[back != UNREACHABLE]
    girth = int(back.min()) + 1 if back.size else None
    return DigraphProfile(
        dist=dist,
        strongly_connected=bool((dist != UNREACHABLE).all()),
        diameter=diameter,
        girth=girth,
    )


@dataclass(frozen=True, eq=False)
class TwoWayPartition:
    """Pairs grouped by two-way distance; ``labels`` indexes into ``keys``."""

    keys: tuple[tuple[int, int], ...]
    labels: np.ndarray

    @property
    def cells(self) -> dict[tuple[int, int], frozenset[tuple[int, int]]]:
        out = {}
        for t, key in enumerate(self.keys):
            xs, ys = np.nonzero(self.labels == t)
            out[key] = frozenset((int(x), int(y)) for x, y in zip(xs, ys))
        return out

    def cell(self, key: tuple[int, int]) -> frozenset[tuple[int, int]]:
        return self.cells[key]


def two_way_partition(g: Digraph, dist: np.ndarray | None = None) -> TwoWayPartition:
    if dist is None:
        dist = distances(g)
    if (dist == UNREACHABLE).any():
        raise NotStronglyConnected("two-way distances need a strongly connected digraph")
    width = int(dist.max()) + 1
    code = dist * width + dist.T
    uniq, inverse = np.unique(code, return_inverse=True)
    keys = tuple((int(c) // width, int(c) % width) for c in uniq)
    labels = inverse.reshape(dist.shape).astype(np.int64)
    labels.setflags(write=False)
    return TwoWayPartition(keys=keys, labels=labels)


def lexicographic_product(outer: Digraph, inner: Digraph) -> Digraph:
    """Vertex (u1, u2) has index ``u1 * inner.n + u2``."""
    m = inner.n
    arcs = np.kron(outer.arcs, np.ones((m, m), dtype=bool)) | np.kron(
        np.eye(outer.n, dtype=bool), inner.arcs
    )
    return Digraph(outer.n * m, arcs)


def _check_blocks(n: int, blocks: Sequence[Sequence[int]]) -> list[list[int]]:
    blocks = [[int(v) for v in b] for b in blocks]
    flat = [v for b in blocks for v in b]
    if any(not b for b in blocks) or sorted(flat) != list(range(n)):
        raise NotAPartition(f"blocks do not partition 0..{n - 1}")
    return blocks


def block_index(n: int, blocks: Sequence[Sequence[int]]) -> np.ndarray:
    blocks = _check_blocks(n, blocks)
    where = np.empty(n, dtype=np.int64)
    for b, block in enumerate(blocks):
        where[block] = b
    return where


def quotient_digraph(g: Digraph, blocks: Sequence[Sequence[int]]) -> Digraph:
    where = block_index(g.n, blocks)
    m = len(blocks)
    arcs = np.zeros((m, m), dtype=bool)
    xs, ys = np.nonzero(g.arcs)
    arcs[where[xs], where[ys]] = True
    np.fill_diagonal(arcs, False)
    return Digraph(m, arcs)


def lex_decompose(g: Digraph, blocks: Sequence[Sequence[int]]) -> tuple[Digraph, Digraph] | None:
    """Split ``g`` as lex(outer, inner) over ``blocks``, or return None.

    Block order gives outer vertex order and the order inside each block gives
    inner vertex order, so ``lexicographic_product(outer, inner)`` equals
    ``g`` relabelled by the concatenation of the blocks.
    """
    blocks = _check_blocks(g.n, blocks)
    sizes = {len(b) for b in blocks}
    if len(sizes) != 1:
        raise UnequalBlockSizes(f"block sizes {sorted(sizes)} differ")
    outer = quotient_digraph(g, blocks)
    inner = g.induced(blocks[0])
    order = [v for b in blocks for v in b]
    rebuilt = lexicographic_product(outer, inner)
    relabelled = g.arcs[np.ix_(order, order)]
    if not np.array_equal(rebuilt.arcs, relabelled):
        return None
    return outer, inner
