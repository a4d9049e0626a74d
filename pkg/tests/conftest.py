from __future__ import annotations

from collections import deque
from pathlib import Path

import numpy as np
import pytest

from scheme_forge.closure import one_class_scheme, wreath_product
from scheme_forge.generators import paley_tournament, thin_cyclic
from scheme_forge.scheme import build_scheme

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"


def difference_relations(n, classes):
    return [[(x, y) for x in range(n) for y in range(n) if (y - x) % n in set(cls)] for cls in classes]


# -- independent oracles (plain Python; never call the code under test) -----

def brute_intersection(n, rel_of, i, j_star, x, y):
    """|{z : (x,z) in R_i, (z,y) in R_j}| given rel_of(x,y) -> index; j_star = index of R_{j*}."""
    return sum(1 for z in range(n) if rel_of(x, z) == i and rel_of(y, z) == j_star)


def bfs_distances(n, arcs):
    """Queue BFS over adjacency lists; -1 for unreachable."""
    adj = [[] for _ in range(n)]
    for x, y in arcs:
        adj[x].append(y)
    dist = [[-1] * n for _ in range(n)]
    for s in range(n):
        dist[s][s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for v in adj[u]:
                if dist[s][v] < 0:
                    dist[s][v] = dist[s][u] + 1
                    q.append(v)
    return dist


def matrix_power_distances(arcs: np.ndarray) -> np.ndarray:
    """Distances from boolean matrix powers: first t with (I + A)^t reaching y."""
    n = arcs.shape[0]
    a = arcs.astype(np.int64)
    reach = np.eye(n, dtype=np.int64)
    dist = np.where(np.eye(n, dtype=bool), 0, -1)
    for t in range(1, n):
        reach = ((reach + reach @ a) > 0).astype(np.int64)
        dist = np.where((dist < 0) & (reach > 0), t, dist)
    return dist


# -- schemes used across modules ---------------------------------------------

@pytest.fixture
def z3():
    return thin_cyclic(3)


@pytest.fixture
def z4():
    return thin_cyclic(4)


@pytest.fixture
def z5():
    return thin_cyclic(5)


@pytest.fixture
def paley7():
    return paley_tournament(7)


@pytest.fixture
def wreath_z3_k2():
    """wreath(inner Z_3, outer 1-class on 2): two triangle classes, one cross class."""
    return wreath_product(thin_cyclic(3), one_class_scheme(2))


@pytest.fixture
def wreath_k2_z3():
    """wreath(inner 1-class on 2, outer Z_3)."""
    return wreath_product(one_class_scheme(2), thin_cyclic(3))


@pytest.fixture
def paley7_built():
    return build_scheme(7, difference_relations(7, [{1, 2, 4}, {3, 5, 6}]), name="paley7")
