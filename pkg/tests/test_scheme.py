from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_intersection, difference_relations
from scheme_forge.errors import IdentityViolation, NonConstantIntersection, NotPartition, NotTransposeClosed
from scheme_forge.generators import enumerate_circulant, thin_cyclic
from scheme_forge.scheme import (
    build_scheme,
    corrupt_tensor,
    permute_points,
    relabel,
    relation_profile,
    verify_identities,
)


def test_build_z3():
    s = build_scheme(3, difference_relations(3, [{1}, {2}]))
    assert s.d == 2
    assert s.k == (1, 1, 1)
    assert s.p[1, 1, 2] == 1
    assert s.star[1] == 2


def test_build_paley7_matches_triple_count(paley7_built):
    qr = {1, 2, 4}

    def rel(x, y):
        return 0 if x == y else (1 if (y - x) % 7 in qr else 2)

    # frozen from brute_intersection over all (x, y) in the relation
    assert paley7_built.p[1, 1, 1] == 1
    assert paley7_built.p[1, 1, 2] == 2
    for i in range(3):
        for j in range(3):
            for x in range(7):
                for y in range(7):
                    want = brute_intersection(7, rel, i, paley7_built.star[j], x, y)
                    assert paley7_built.p[i, j, rel(x, y)] == want


def test_incomplete_partition_rejected():
    with pytest.raises(NotPartition):
        build_scheme(3, [[(0, 1)]])


def test_duplicate_pair_rejected():
    rels = difference_relations(3, [{1}, {2}])
    rels[1].append((0, 1))
    with pytest.raises(NotPartition):
        build_scheme(3, rels)


def test_diagonal_pair_rejected():
    with pytest.raises(NotPartition):
        build_scheme(2, [[(0, 1), (1, 0), (0, 0)]])


def test_not_transpose_closed():
    # R_1 = {(0,1),(1,2),(2,0),(0,2)}; its transpose straddles R_1 and R_2
    rels = [[(0, 1), (1, 2), (2, 0), (0, 2)], [(1, 0), (2, 1)]]
    with pytest.raises(NotTransposeClosed):
        build_scheme(3, rels)


def test_non_constant_intersection_witness():
    # Z_6 classes {1,2},{4,5},{3}: fails constancy
    with pytest.raises(NonConstantIntersection) as err:
        build_scheme(6, difference_relations(6, [{1, 2}, {4, 5}, {3}]))
    e = err.value
    assert len(e.witnesses) == 2 and e.counts[0] != e.counts[1]
    assert e.to_dict()["error"] == "NonConstantIntersection"


def test_identities_z3(z3):
    rep = verify_identities(z3)
    assert rep.passed
    assert set(rep.checked) == {"unit", "valency", "(1)", "(2)", "(3)", "(4)", "product"}
    # identity (3) at i=h=1: p[1][0][1] + p[1][1][1] + p[1][2][1] = k_1
    assert [int(z3.p[1, j, 1]) for j in range(3)] == [1, 0, 0]
    assert z3.k[1] == 1


def test_two_class_identity_on_paley7(paley7):
    assert paley7.p[1, 1, 2] == 1 + paley7.p[1, 2, 1]
    assert (paley7.p[1, 1, 2], paley7.p[1, 2, 1]) == (2, 1)


@pytest.mark.parametrize("triple", [(1, 1, 2), (0, 1, 1), (2, 2, 0), (1, 2, 0)])
def test_corrupted_tensor_detected(z4, triple):
    with pytest.raises(IdentityViolation):
        verify_identities(corrupt_tensor(z4, *triple))


def test_profile_z3(z3):
    prof = relation_profile(z3)
    assert prof.nonsymmetric_pairs == ((1, 2),)
    assert prof.commutative


def test_profile_z4(z4):
    prof = relation_profile(z4)
    assert prof.nonsymmetric_pair_count == 1
    assert prof.symmetric[3]
    assert prof.commutative


def test_profile_z5(z5):
    assert relation_profile(z5).nonsymmetric_pair_count == 2


def test_relabel_round_trip(z4):
    t = relabel(z4, [0, 2, 1, 3])
    assert t.star == (0, 2, 1, 3)
    assert t.p[2, 2, 3] == z4.p[1, 1, 3]
    assert relabel(t, [0, 2, 1, 3]).same_as(z4)


def test_relabel_must_fix_zero(z4):
    with pytest.raises(ValueError):
        relabel(z4, [1, 0, 2, 3])


def test_permute_points_preserves_tensor(paley7):
    perm = [3, 1, 6, 0, 2, 5, 4]
    t = permute_points(paley7, perm)
    assert np.array_equal(t.p, paley7.p)


def test_non_commutative_scheme_detected():
    # thin scheme of S_3 (regular action) is non-commutative
    import itertools

    perms = list(itertools.permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}

    def mul(a, b):
        return tuple(a[b[t]] for t in range(3))

    def inv(a):
        out = [0] * 3
        for t, v in enumerate(a):
            out[v] = t
        return tuple(out)

    rels = []
    for g in perms[1:]:
        rels.append([(index[x], index[mul(x, g)]) for x in perms])
    s = build_scheme(6, rels)
    assert verify_identities(s).passed
    assert not relation_profile(s).commutative


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=2, max_value=9).flatmap(
    lambda n: st.tuples(st.just(n), st.integers(min_value=0, max_value=10 ** 6))))
def test_unit_rows_hold_for_circulants(args):
    n, seed = args
    schemes = list(enumerate_circulant(n))
    s = schemes[seed % len(schemes)]
    D = s.d + 1
    assert np.array_equal(s.p[:, 0, :], np.eye(D, dtype=np.int64))
    assert np.array_equal(s.p[0, :, :], np.eye(D, dtype=np.int64))
    assert sum(s.k) == s.n


def test_thin_cyclic_orders_classes_in_negation_pairs():
    s = thin_cyclic(5)
    assert [sorted(c) for c in s.provenance["classes"]] == [[1], [4], [2], [3]]
