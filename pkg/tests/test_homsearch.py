import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import complete_sym, cycle_sym, digraph, no_relation
from homcount.errors import SignatureMismatchError
from homcount.homsearch import count_morphisms, hom_count
from homcount.sigstruct import (
    E_SM,
    SE_M,
    MorphismClass,
    Signature,
    Structure,
    disjoint_union,
    validate_morphism,
)
from oracles import naive_count, naive_morphisms

CLS = MorphismClass


def random_digraph(rng, n, p=0.4):
    arcs = {(i, j) for i in range(n) for j in range(n) if rng.random() < p}
    return digraph(n, arcs)


def test_free_point_count(point):
    for a in [no_relation(4), cycle_sym(5), complete_sym(3)]:
        assert hom_count(point, a) == a.size


def test_single_arc_into_k3(single_arc, k3):
    # Frozen from brute force over the 9 maps.
    assert hom_count(single_arc, k3) == 6


def test_k3_self_counts(k3):
    assert count_morphisms(k3, k3, CLS.MONO).count == 6
    assert hom_count(k3, k3) == 6


def test_k3_into_bipartite_c6(k3, c6):
    assert hom_count(k3, c6) == 0


def test_counts_match_naive_oracle_exhaustively():
    rng = random.Random(5)
    structures = [random_digraph(rng, n) for n in (1, 2, 3) for _ in range(6)]
    structures += [no_relation(2), digraph(1, {(0, 0)}), cycle_sym(3)]
    for c in structures:
        for a in structures:
            for cls in CLS:
                for system in (SE_M, E_SM):
                    got = count_morphisms(c, a, cls, system).count
                    assert got == naive_count(c, a, cls, system), (c, a, cls, system)


def test_enumeration_matches_naive_maps(single_arc, k3):
    res = count_morphisms(single_arc, k3, CLS.HOM, enumerate_witnesses=True)
    got = sorted(m.map for m in res.witnesses)
    assert got == sorted(naive_morphisms(single_arc, k3))
    assert res.count == len(res.witnesses)
    assert not res.truncated


def test_enumeration_limit_flags_truncation(k3):
    res = count_morphisms(k3, k3, CLS.HOM, enumerate_witnesses=True, limit=2)
    assert res.truncated
    assert len(res.witnesses) == 2
    assert res.count == 6


def test_limit_must_be_positive(k3):
    with pytest.raises(ValueError):
        count_morphisms(k3, k3, limit=0)


def test_signature_mismatch(k3):
    other = Structure.build(Signature((("R", 3),)), 2, {})
    with pytest.raises(SignatureMismatchError):
        count_morphisms(k3, other)


def test_class_count_inequalities():
    rng = random.Random(9)
    for _ in range(25):
        c = random_digraph(rng, rng.randint(1, 3))
        a = random_digraph(rng, rng.randint(1, 3))
        hom = hom_count(c, a)
        mono = count_morphisms(c, a, CLS.MONO).count
        strong = count_morphisms(c, a, CLS.STRONG_MONO).count
        assert strong <= mono <= hom


def test_multiplicativity_over_disjoint_union_size_le_3():
    # hom(c1 + c2, a) = hom(c1, a) * hom(c2, a), deterministic digraph family.
    rng = random.Random(13)
    smalls = [random_digraph(rng, n) for n in (1, 2) for _ in range(5)]
    targets = [random_digraph(rng, 3) for _ in range(6)] + [cycle_sym(3)]
    for c1 in smalls:
        for c2 in smalls:
            for a in targets:
                assert hom_count(disjoint_union(c1, c2), a) == hom_count(
                    c1, a
                ) * hom_count(c2, a)


def test_additivity_for_connected_sources():
    connected = [complete_sym(3), cycle_sym(3), digraph(2, {(0, 1)}),
                 digraph(3, {(0, 1), (1, 2), (2, 0)})]
    rng = random.Random(17)
    targets = [random_digraph(rng, 2), random_digraph(rng, 3), cycle_sym(3)]
    for c in connected:
        for a in targets:
            for b in targets:
                assert hom_count(c, disjoint_union(a, b)) == hom_count(
                    c, a
                ) + hom_count(c, b)


def test_precomposition_with_quotient_is_injective():
    # For a quotient q: c ->> m (either system), h -> h . q is injective from
    # hom(m, a) into hom(c, a); checked on every quotient between family members.
    rng = random.Random(23)
    family = [random_digraph(rng, n) for n in (2, 3) for _ in range(4)]
    targets = [random_digraph(rng, 3) for _ in range(3)]
    checked = 0
    for c in family:
        for m in family:
            for q in itertools.product(range(m.size), repeat=c.size):
                for system in (SE_M, E_SM):
                    if not validate_morphism(q, c, m, CLS.QUOTIENT, system):
                        continue
                    for a in targets:
                        homs_m = naive_morphisms(m, a)
                        composed = {tuple(h[q[x]] for x in range(c.size))
                                    for h in homs_m}
                        assert len(composed) == len(homs_m)
                        checked += 1
    assert checked > 0


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_iso_invariance_of_counts(data):
    n = data.draw(st.integers(1, 3))
    arcs = data.draw(st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))))
    c = digraph(n, arcs)
    m = data.draw(st.integers(1, 3))
    arcs_a = data.draw(st.sets(st.tuples(st.integers(0, m - 1), st.integers(0, m - 1))))
    a = digraph(m, arcs_a)
    perm_c = data.draw(st.permutations(range(n)))
    perm_a = data.draw(st.permutations(range(m)))
    c2 = digraph(n, {(perm_c[x], perm_c[y]) for x, y in arcs})
    a2 = digraph(m, {(perm_a[x], perm_a[y]) for x, y in arcs_a})
    for cls in (CLS.HOM, CLS.MONO, CLS.SURJECTION):
        assert count_morphisms(c, a, cls).count == count_morphisms(c2, a2, cls).count


def test_empty_source_and_target():
    empty = no_relation(0)
    pt = no_relation(1)
    assert hom_count(empty, pt) == 1
    assert hom_count(empty, empty) == 1
    assert hom_count(pt, empty) == 0
    assert count_morphisms(empty, pt, CLS.SURJECTION).count == 0
    assert count_morphisms(empty, empty, CLS.SURJECTION).count == 1
