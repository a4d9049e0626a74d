"""Circulant schemes, corpus enumeration and a small catalog of named schemes."""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from math import gcd
from typing import Iterator, Sequence

import numpy as np

from .closure import one_class_scheme, wreath_product
from .errors import AxiomError, BadParams, BadRange, BadSpec, UnknownName
from .scheme import Scheme, scheme_from_labels

EXHAUSTIVE_MAX_N = 8
ORBIT_MAX_N = 20


@dataclass(frozen=True)
class CirculantSpec:
    modulus: int
    classes: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = self.modulus
        classes = tuple(tuple(sorted(int(c) % n for c in cls)) for cls in self.classes)
        object.__setattr__(self, "classes", classes)
        if n < 1:
            raise BadSpec("modulus must be positive")
        flat = sorted(c for cls in classes for c in cls)
        if any(not cls for cls in classes) or flat != list(range(1, n)):
            raise BadSpec(f"classes must partition 1..{n - 1}")
        as_sets = {frozenset(cls) for cls in classes}
        for cls in classes:
            if frozenset((-c) % n for c in cls) not in as_sets:
                raise BadSpec(f"negation of class {list(cls)} is not a class")


def circulant_labels(spec: CirculantSpec) -> np.ndarray:
    n = spec.modulus
    lookup = np.zeros(n, dtype=np.int64)
    for idx, cls in enumerate(spec.classes, start=1):
        lookup[list(cls)] = idx
    x = np.arange(n)
    return lookup[(x[None, :] - x[:, None]) % n]


def schur_condition(spec: CirculantSpec) -> bool:
    """Fast group-ring test: every product of class sums is constant on classes."""
    n = spec.modulus
    ind = np.zeros((len(spec.classes) + 1, n), dtype=np.int64)
    ind[0, 0] = 1
    for t, cls in enumerate(spec.classes, start=1):
        ind[t, list(cls)] = 1
    idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    for a in range(1, len(ind)):
        for b in range(a, len(ind)):
            conv = ind[b][idx] @ ind[a]  # conv[g] = #{(u, v): u in C_a, v in C_b, u + v = g}
            for cls in spec.classes:
                vals = conv[list(cls)]
                if vals.min() != vals.max():
                    return False
    return True


def circulant_scheme(spec: CirculantSpec, *, name: str | None = None, strict: bool = False) -> Scheme | None:
    """Scheme with relations {(x, y): y - x in C}; None if the axioms fail.

    With ``strict`` the axiom error (carrying its witness) is raised instead.
    """
    label = name if name is not None else f"circulant({spec.modulus};{_classes_str(spec.classes)})"
    try:
        return scheme_from_labels(
            circulant_labels(spec),
            d=len(spec.classes),
            name=label,
            provenance={"construction": "circulant", "modulus": spec.modulus, "classes": [list(c) for c in spec.classes]},
        )
    except AxiomError:
        if strict:
            raise
        return None


def _classes_str(classes) -> str:
    return "|".join(",".join(str(c) for c in cls) for cls in classes)


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def set_partitions(items: Sequence) -> Iterator[list[list]]:
    """All set partitions, blocks in order of first element."""
    items = list(items)
    if not items:
        yield []
        return

    def grow(pos: int, blocks: list[list]):
        if pos == len(items):
            yield [list(b) for b in blocks]
            return
        x = items[pos]
        for b in blocks:
            b.append(x)
            yield from grow(pos + 1, blocks)
            b.pop()
        blocks.append([x])
        yield from grow(pos + 1, blocks)
        blocks.pop()

    yield from grow(0, [])


def _negation_closed(n: int, classes: Sequence[Sequence[int]]) -> bool:
    sets = {frozenset(c) for c in classes}
    return all(frozenset((-x) % n for x in c) in sets for c in sets)


def _canonical_classes(n: int, classes) -> tuple[tuple[int, ...], ...]:
    """Classes sorted by least element, negation partners adjacent."""
    classes = sorted((tuple(sorted(c)) for c in classes), key=lambda c: c[0])
    out: list[tuple[int, ...]] = []
    used: set[tuple[int, ...]] = set()
    for c in classes:
        if c in used:
            continue
        out.append(c)
        used.add(c)
        partner = tuple(sorted((-x) % n for x in c))
        if partner != c:
            out.append(partner)
            used.add(partner)
    return tuple(out)


def units(n: int) -> list[int]:
    return [u for u in range(1, n) if gcd(u, n) == 1] if n > 1 else []


def multiplier_subgroups(n: int) -> list[tuple[int, ...]]:
    """All subgroups of the unit group of Z_n, each as a sorted tuple."""
    us = units(n)
    found: set[tuple[int, ...]] = set()
    for r in range(0, 3):  # unit groups for n <= 20 need at most 2 generators
        for gens in combinations(us, r):
            found.add(_generated(n, gens))
    return sorted(found, key=lambda H: (len(H), H))


def _generated(n: int, gens: Sequence[int]) -> tuple[int, ...]:
    group = {1 % n}
    frontier = [1 % n]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = (x * g) % n
            if y not in group:
                group.add(y)
                frontier.append(y)
    return tuple(sorted(group))


def multiplier_orbits(n: int, group: Sequence[int]) -> list[tuple[int, ...]]:
    seen: set[int] = set()
    orbits = []
    for x in range(1, n):
        if x in seen:
            continue
        orb = tuple(sorted({(x * u) % n for u in group}))
        seen.update(orb)
        orbits.append(orb)
    return orbits


def _candidate_partitions(n: int, generators: Sequence[Sequence[int]] | None, max_orbits: int):
    if n <= EXHAUSTIVE_MAX_N and generators is None:
        yield from set_partitions(range(1, n))
        return
    groups = multiplier_subgroups(n) if generators is None else [_generated(n, g) for g in generators]
    for H in groups:
        orbits = multiplier_orbits(n, H)
        if len(orbits) > max_orbits:
            yield [list(o) for o in orbits]
            continue
        for coarse in set_partitions(orbits):
            yield [sorted(x for orb in block for x in orb) for block in coarse]


def enumerate_circulant(
    n: int,
    *,
    generators: Sequence[Sequence[int]] | None = None,
    max_orbits: int = 8,
) -> Iterator[Scheme]:
    """Circulant schemes on Z_n, each partition emitted once.

    For n <= 8 every set partition of 1..n-1 is tried.  Above that, classes
    are unions of orbits of multiplier subgroups: all subgroups of the unit
    group by default, or the subgroups generated by each entry of
    ``generators``.  Orbit partitions with more than ``max_orbits`` orbits are
    tried as-is without coarsening.
    """
    if not 2 <= n <= ORBIT_MAX_N:
        raise BadRange(f"modulus {n} outside 2..{ORBIT_MAX_N}")
    seen: set[tuple[tuple[int, ...], ...]] = set()
    index = 0
    for classes in _candidate_partitions(n, generators, max_orbits):
        if not _negation_closed(n, classes):
            continue
        canon = _canonical_classes(n, classes)
        if canon in seen:
            continue
        seen.add(canon)
        spec = CirculantSpec(n, canon)
        if not schur_condition(spec):
            continue
        s = circulant_scheme(spec, name=f"circ-n{n}-{index}")
        if s is None:
            raise AssertionError(f"group-ring test and validator disagree on {canon}")
        index += 1
        yield s


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

def _is_prime(q: int) -> bool:
    return q > 1 and all(q % f for f in range(2, int(q ** 0.5) + 1))


def thin_cyclic(n: int) -> Scheme:
    """Z_n with singleton classes ordered {1}, {n-1}, {2}, {n-2}, ..."""
    if n < 2:
        raise BadParams("thin_cyclic needs n >= 2")
    classes = []
    for c in range(1, n // 2 + 1):
        classes.append((c,))
        if (-c) % n != c:
            classes.append(((-c) % n,))
    return circulant_scheme(CirculantSpec(n, tuple(classes)), name=f"thin_cyclic({n})", strict=True)


def directed_cycle_scheme(n: int) -> Scheme:
    """Distance scheme of the directed n-cycle: relation i is {+i}."""
    if n < 2:
        raise BadParams("directed_cycle needs n >= 2")
    return circulant_scheme(
        CirculantSpec(n, tuple((c,) for c in range(1, n))), name=f"directed_cycle({n})", strict=True
    )


def quadratic_residues(q: int) -> list[int]:
    return sorted({(x * x) % q for x in range(1, q)})


def paley_tournament(q: int) -> Scheme:
    if not _is_prime(q) or q % 4 != 3:
        raise BadParams(f"paley_tournament needs a prime q = 3 mod 4, got {q}")
    qr = quadratic_residues(q)
    nqr = [x for x in range(1, q) if x not in qr]
    return circulant_scheme(CirculantSpec(q, (tuple(qr), tuple(nqr))), name=f"paley_tournament({q})", strict=True)


def one_class(m: int) -> Scheme:
    if m < 2:
        raise BadParams("one_class needs m >= 2")
    return one_class_scheme(m)


def lex_blowup(s: Scheme, m: int) -> Scheme:
    """Scheme attached to lex(Gamma, empty m): wreath(one_class(m), s)."""
    if m < 1:
        raise BadParams("lex_blowup needs m >= 1")
    if m == 1:
        return s
    return wreath_product(one_class(m), s, name=f"lex_blowup({s.name},{m})")


_INT_BUILDERS = {
    "directed_cycle": directed_cycle_scheme,
    "paley_tournament": paley_tournament,
    "thin_cyclic": thin_cyclic,
    "one_class": one_class,
}


def catalog(name: str, *params) -> Scheme:
    """Named scheme; ``name`` may also be a full expression like ``wreath(thin_cyclic(3),one_class(2))``."""
    if not params and "(" in name:
        return parse_catalog(name)
    if name in _INT_BUILDERS:
        if len(params) != 1 or not isinstance(params[0], (int, np.integer)):
            raise BadParams(f"{name} takes one integer parameter")
        return _INT_BUILDERS[name](int(params[0]))
    if name == "wreath":
        if len(params) != 2:
            raise BadParams("wreath takes two schemes")
        inner, outer = (_as_scheme(p) for p in params)
        return wreath_product(inner, outer, name=f"wreath({inner.name},{outer.name})")
    if name == "lex_blowup":
        if len(params) != 2 or not isinstance(params[1], (int, np.integer)):
            raise BadParams("lex_blowup takes a scheme and an integer")
        return lex_blowup(_as_scheme(params[0]), int(params[1]))
    raise UnknownName(f"unknown catalog entry {name!r}")


def _as_scheme(p) -> Scheme:
    if isinstance(p, Scheme):
        return p
    if isinstance(p, str):
        return parse_catalog(p)
    raise BadParams(f"expected a scheme or catalog expression, got {p!r}")


_TOKEN = re.compile(r"\s*(?:([A-Za-z_]\w*)|(\d+)|(.))")


def parse_catalog(expr: str) -> Scheme:
    """Evaluate a nested catalog expression."""
    tokens = [(m.group(1), m.group(2), m.group(3)) for m in _TOKEN.finditer(expr) if m.group(0).strip()]
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None, None)

    def expect(ch):
        nonlocal pos
        if peek()[2] != ch:
            raise BadParams(f"expected {ch!r} in {expr!r}")
        pos += 1

    def value():
        nonlocal pos
        ident, num, _ = peek()
        if num is not None:
            pos += 1
            return int(num)
        if ident is None:
            raise BadParams(f"malformed catalog expression {expr!r}")
        pos += 1
        expect("(")
        args = [value()]
        while peek()[2] == ",":
            pos += 1
            args.append(value())
        expect(")")
        return catalog(ident, *args)

    out = value()
    if pos != len(tokens) or not isinstance(out, Scheme):
        raise BadParams(f"malformed catalog expression {expr!r}")
    return out


# ---------------------------------------------------------------------------
# desk-scale corpus
# ---------------------------------------------------------------------------

def catalog_corpus(max_m: int = 4) -> list[Scheme]:
    """Named schemes: Z_3, Z_4, Paley-7 and the two Z_3 wreath families."""
    out = [thin_cyclic(3), thin_cyclic(4), paley_tournament(7)]
    for m in range(2, max_m + 1):
        out.append(catalog("wreath", one_class(m), thin_cyclic(3)))
        out.append(catalog("wreath", thin_cyclic(3), one_class(m)))
    return out


def circulant_corpus(max_n: int = ORBIT_MAX_N, **kwargs) -> Iterator[Scheme]:
    for n in range(2, max_n + 1):
        yield from enumerate_circulant(n, **kwargs)


def corpus(max_n: int = ORBIT_MAX_N) -> list[Scheme]:
    return list(circulant_corpus(max_n)) + catalog_corpus()
