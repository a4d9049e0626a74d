from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scheme_forge.classify import canonical_labeling
from scheme_forge.closure import (
    closed_subset,
    closure,
    complex_product,
    is_closed,
    one_class_scheme,
    quotient_scheme,
    subscheme,
    wedge_conditions,
    wreath_decomposition,
    wreath_decompositions,
    wreath_product,
)
from scheme_forge.errors import NotClosed, NotNested
from scheme_forge.generators import (
    CirculantSpec,
    catalog_corpus,
    circulant_scheme,
    enumerate_circulant,
    paley_tournament,
    thin_cyclic,
)
from scheme_forge.scheme import relabel, relation_profile, scheme_from_labels, verify_identities

SMALL = [s for n in range(2, 11) for s in enumerate_circulant(n)] + catalog_corpus(3)


def test_complex_products(z3, z4, paley7):
    assert complex_product(z3, {1}, {1}) == {2}
    assert complex_product(z4, {3}, {3}) == {0}
    assert complex_product(paley7, {1}, {1}) == {1, 2}


def test_closure_examples(z4, wreath_z3_k2):
    F = closure(z4, {3})
    assert F.indices == {0, 3}
    assert F.fibers == ((0, 2), (1, 3))
    assert closure(z4, {1}).indices == {0, 1, 2, 3}
    G = closure(wreath_z3_k2, {1})
    assert G.indices == {0, 1, 2}
    assert G.fibers == ((0, 1, 2), (3, 4, 5))


def test_closed_subset_rejects_open_sets(z4):
    with pytest.raises(NotClosed):
        closed_subset(z4, {0, 1})
    assert not is_closed(z4, {3})


def test_subscheme_of_wreath_is_inner(wreath_z3_k2):
    for x in range(6):
        sub = subscheme(wreath_z3_k2, {0, 1, 2}, x)
        assert sub.same_as(thin_cyclic(3))


def test_subscheme_trivial_and_full(paley7):
    assert subscheme(paley7, {0}, 4).n == 1
    full = subscheme(paley7, {0, 1, 2}, 0)
    assert full.same_as(paley7)
    assert full.provenance["index_map"] == {"0": 0, "1": 1, "2": 2}


def test_quotient_examples(z4, wreath_z3_k2, paley7):
    q = quotient_scheme(wreath_z3_k2, {0, 1, 2})
    assert q.same_as(one_class_scheme(2))
    assert quotient_scheme(paley7, {0}).same_as(paley7)
    assert quotient_scheme(z4, {0, 3}).same_as(one_class_scheme(2))


def test_wreath_examples(wreath_k2_z3, wreath_z3_k2, paley7):
    assert (wreath_k2_z3.n, wreath_k2_z3.d, wreath_k2_z3.k) == (6, 3, (1, 1, 2, 2))
    assert (wreath_z3_k2.n, wreath_z3_k2.d, wreath_z3_k2.k) == (6, 3, (1, 1, 1, 3))
    assert wreath_product(paley7, one_class_scheme(1)).same_as(paley7)


def test_wedge_examples(wreath_z3_k2, z4, paley7):
    assert wedge_conditions(wreath_z3_k2, {0, 1, 2}, {0, 1, 2})
    assert wedge_conditions(paley7, {0}, {0})
    # A_3 A_1 = A_2 in Z_4, so (a) fails at j = 1
    assert not wedge_conditions(z4, {0, 3}, {0, 3})


def test_wedge_needs_nesting(wreath_z3_k2):
    with pytest.raises(NotNested):
        wedge_conditions(wreath_z3_k2, {0, 1, 2}, {0})


def test_wreath_decomposition_examples(wreath_k2_z3, z3, z4):
    dec = wreath_decomposition(wreath_k2_z3)
    assert dec is not None and dec.a == 1
    assert dec.closed.fiber_size == 2
    assert dec.quotient.same_as(thin_cyclic(3))
    assert wreath_decomposition(z3) is None
    assert z4.p[3, 1, 1] == 0
    assert wreath_decomposition(z4) is None


def test_wreath_decompositions_lists_every_inner_class():
    s = wreath_product(one_class_scheme(2), one_class_scheme(2))
    assert [dec.a for dec in wreath_decompositions(s)] == [1]
    # Z_2 x Z_2 thin scheme: R_1 R_2 = R_3, so no class is fiber-blind
    labels = np.array([[x ^ y for y in range(4)] for x in range(4)])
    assert wreath_decompositions(scheme_from_labels(labels, d=3)) == []
    # Z_8 with classes {1,5},{3,7},{2,6},{4}: the {4} class splits off
    z8 = circulant_scheme(CirculantSpec(8, ((1, 5), (3, 7), (2, 6), (4,))))
    decs = wreath_decompositions(z8)
    assert [dec.a for dec in decs] == [4]
    assert decs[0].quotient.same_as(thin_cyclic(4))


def test_small_corpus_constructions_validate():
    built = 0
    for s in SMALL:
        for a in range(1, s.d + 1):
            F = closure(s, {a})
            if F.indices == set(range(s.d + 1)):
                continue
            sub = subscheme(s, F, 0)
            q = quotient_scheme(s, F)
            assert verify_identities(sub).passed and verify_identities(q).passed
            assert sub.n == F.fiber_size and q.n * sub.n == s.n
            built += 1
    assert built > 50


@pytest.mark.parametrize("inner_name", ["z3", "paley7", "one"])
@pytest.mark.parametrize("outer_name", ["z3", "z4", "one"])
def test_wreath_round_trip(inner_name, outer_name):
    pick = {"z3": thin_cyclic(3), "z4": thin_cyclic(4), "paley7": paley_tournament(7), "one": one_class_scheme(3)}
    inner, outer = pick[inner_name], pick[outer_name]
    w = wreath_product(inner, outer)
    assert (w.n, w.d) == (inner.n * outer.n, inner.d + outer.d)
    F = closure(w, range(inner.d + 1))
    assert F.indices == set(range(inner.d + 1))
    for x in range(0, w.n, inner.n):
        assert subscheme(w, F, x).same_as(inner)
    assert quotient_scheme(w, F).same_as(outer)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_closure_is_extensive_monotone_idempotent(s, data):
    idx = st.sets(st.integers(min_value=0, max_value=s.d), min_size=1)
    K = data.draw(idx)
    L = K | data.draw(idx)
    cK, cL = closure(s, K), closure(s, L)
    assert K <= cK.indices
    assert cK.indices <= cL.indices
    assert closure(s, cK.indices).indices == cK.indices
    assert is_closed(s, cK.indices)
    # fibers partition X and each is the union-of-relations neighborhood
    pts = sorted(v for f in cK.fibers for v in f)
    assert pts == list(range(s.n))
    for f in cK.fibers:
        assert set(f) == {y for y in range(s.n) if int(s.labels[f[0], y]) in cK.indices}


def test_one_nonsym_pair_d3_closure_of_symmetric_class():
    seen = 0
    for s in SMALL:
        if s.d != 3 or relation_profile(s).nonsymmetric_pair_count != 1:
            continue
        t = relabel(s, canonical_labeling(s))
        if t.p[1, t.star[1], 3] != t.k[1]:
            continue
        assert closure(t, {3}).indices == {0, 3}
        seen += 1
    assert seen >= 1
