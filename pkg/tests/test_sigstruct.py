import itertools

import pytest

from conftest import complete_sym, cycle_sym, digraph, no_relation, path_sym
from homcount.errors import CapExceededError, SignatureMismatchError
from homcount.sigstruct import (
    E_SM,
    GRAPH_SIGNATURE,
    SE_M,
    Morphism,
    MorphismClass,
    Signature,
    Structure,
    are_isomorphic,
    canonical_form,
    canonical_representative,
    disjoint_union,
    identity_morphism,
    pushout,
    validate_morphism,
)
from oracles import brute_isomorphic, naive_count

CLS = MorphismClass


def all_small_digraphs(n):
    slots = [(i, j) for i in range(n) for j in range(n)]
    for bits in itertools.product((0, 1), repeat=len(slots)):
        arcs = {p for p, b in zip(slots, bits) if b}
        yield digraph(n, arcs)


def test_signature_validation():
    with pytest.raises(ValueError):
        Signature((("E", 2), ("E", 3)))
    with pytest.raises(ValueError):
        Signature((("E", 0),))


def test_structure_validation():
    with pytest.raises(ValueError):
        Structure.build(GRAPH_SIGNATURE, 2, {"E": {(0, 2)}})
    with pytest.raises(ValueError):
        Structure.build(GRAPH_SIGNATURE, 2, {"E": {(0, 1, 1)}})
    with pytest.raises(ValueError):
        Structure.build(GRAPH_SIGNATURE, 2, {"R": {(0, 1)}})


def test_validate_morphism_identity_is_hom(k3):
    assert validate_morphism((0, 1, 2), k3, k3, CLS.HOM)


def test_validate_morphism_constant_map_to_loopless_point_fails(single_arc, point):
    assert not validate_morphism((0, 0), single_arc, point, CLS.HOM)


def test_validate_morphism_quotient_arc_to_loop(single_arc, loop_point):
    # Derived by enumerating the tuple-image condition: the loop (0,0) is the
    # image of the arc (0,1) under the constant map.
    assert validate_morphism((0, 0), single_arc, loop_point, CLS.QUOTIENT, SE_M)


def test_validate_morphism_signature_mismatch(k3):
    other = Structure.build(Signature((("R", 2),)), 3, {})
    with pytest.raises(SignatureMismatchError):
        validate_morphism((0, 1, 2), k3, other, CLS.HOM)


def test_class_implications_on_small_structures():
    # quotient => surjection => hom and strong-mono => mono => hom,
    # over every map between all digraphs of size <= 2.
    structures = list(all_small_digraphs(1)) + list(all_small_digraphs(2))
    for c in structures:
        for a in structures:
            for f in itertools.product(range(a.size), repeat=c.size):
                for system in (SE_M, E_SM):
                    if validate_morphism(f, c, a, CLS.QUOTIENT, system):
                        assert validate_morphism(f, c, a, CLS.SURJECTION)
                    if validate_morphism(f, c, a, CLS.SURJECTION):
                        assert validate_morphism(f, c, a, CLS.HOM)
                    if validate_morphism(f, c, a, CLS.STRONG_MONO):
                        assert validate_morphism(f, c, a, CLS.MONO)
                    if validate_morphism(f, c, a, CLS.MONO):
                        assert validate_morphism(f, c, a, CLS.HOM)


def test_quotient_and_embedding_implies_isomorphism():
    # In either system, a map that is both a quotient and an embedding must be
    # bijective with a homomorphism inverse.  Exhaustive at size <= 3 over a
    # deterministic family, all maps.
    family = [no_relation(2), digraph(2, {(0, 1)}), digraph(3, {(0, 1), (1, 2)}),
              complete_sym(3), digraph(3, {(0, 0), (1, 2)}), cycle_sym(3)]
    for c in family:
        for a in family:
            for f in itertools.product(range(a.size), repeat=c.size):
                for system, emb in ((SE_M, CLS.MONO), (E_SM, CLS.STRONG_MONO)):
                    if (validate_morphism(f, c, a, CLS.QUOTIENT, system)
                            and validate_morphism(f, c, a, emb, system)):
                        assert brute_isomorphic(c, a)
                        inv = [0] * c.size
                        for x, y in enumerate(f):
                            inv[y] = x
                        assert validate_morphism(inv, a, c, CLS.HOM)


def test_morphism_rejects_non_hom(single_arc, point):
    with pytest.raises(ValueError):
        Morphism.build(single_arc, point, (0, 0))


def test_morphism_tags(single_arc, loop_point):
    m = Morphism.build(single_arc, loop_point, (0, 0))
    assert CLS.HOM in m.class_tags
    assert CLS.SURJECTION in m.class_tags
    assert CLS.QUOTIENT in m.class_tags
    assert CLS.MONO not in m.class_tags


def test_are_isomorphic_reflexive(k3, c6):
    assert are_isomorphic(k3, k3)
    assert are_isomorphic(c6, c6)


def test_c6_not_isomorphic_to_two_triangles(c6, two_c3):
    # Frozen from the 720-bijection exhaustion oracle.
    assert brute_isomorphic(c6, two_c3) is False
    assert are_isomorphic(c6, two_c3) is False


def test_relabeled_k3_isomorphic(k3):
    relabeled = digraph(3, {(2, 1), (1, 2), (2, 0), (0, 2), (1, 0), (0, 1)})
    assert are_isomorphic(k3, relabeled)


def test_are_isomorphic_agrees_with_brute_force_size_3():
    structures = list(all_small_digraphs(3))
    import random

    rng = random.Random(7)
    sample = rng.sample(structures, 40)
    for a in sample:
        for b in rng.sample(structures, 12):
            assert are_isomorphic(a, b) == brute_isomorphic(a, b)


def test_disjoint_union_unit_law(k3):
    empty = no_relation(0)
    assert are_isomorphic(disjoint_union(k3, empty), k3)


def test_disjoint_union_two_triangles(two_c3):
    assert two_c3.size == 6
    assert len(two_c3.relation("E")) == 12


def test_point_counts_add_over_disjoint_union(point):
    for a in all_small_digraphs(2):
        for b in [no_relation(3), cycle_sym(3)]:
            u = disjoint_union(a, b)
            assert naive_count(point, u) == a.size + b.size


def test_pushout_of_identity_legs(k3):
    ident = identity_morphism(k3)
    p, la, lb = pushout(ident, ident)
    assert are_isomorphic(p, k3)
    assert la.map == lb.map


def test_pushout_glues_arcs_into_path():
    arc = digraph(2, {(0, 1)})
    pt = no_relation(1)
    # include the shared vertex as target of one arc and source of the other
    f = Morphism.build(pt, arc, (1,))
    g = Morphism.build(pt, arc, (0,))
    p, la, lb = pushout(f, g)
    assert p.size == 3
    assert len(p.relation("E")) == 2
    expected = digraph(3, {(0, 1), (1, 2)})
    assert are_isomorphic(p, expected)


def test_pushout_in_finset():
    sig = Signature((("U", 1),))
    one = Structure.build(sig, 1, {})
    two = Structure.build(sig, 2, {})
    f = Morphism.build(one, two, (0,))
    g = Morphism.build(one, two, (1,))
    p, _, _ = pushout(f, g)
    assert p.size == 3


def test_pushout_commutes_and_is_universal_on_small_instances():
    # Universal property on every span between <=2-element digraphs: for any
    # commuting cocone there is exactly one mediating hom from the pushout.
    structures = list(all_small_digraphs(1)) + list(all_small_digraphs(2))
    import random

    rng = random.Random(3)
    spans = []
    for c in structures[:8]:
        for a in rng.sample(structures, 6):
            for b in rng.sample(structures, 4):
                fs = [f for f in itertools.product(range(a.size), repeat=c.size)
                      if validate_morphism(f, c, a, CLS.HOM)]
                gs = [g for g in itertools.product(range(b.size), repeat=c.size)
                      if validate_morphism(g, c, b, CLS.HOM)]
                if fs and gs:
                    spans.append((c, a, b, fs[0], gs[-1]))
    assert spans
    for c, a, b, fm, gm in spans:
        f = Morphism.build(c, a, fm)
        g = Morphism.build(c, b, gm)
        p, la, lb = pushout(f, g)
        assert all(la.map[f.map[x]] == lb.map[g.map[x]] for x in range(c.size))
        for t in structures[:6]:
            for u in itertools.product(range(t.size), repeat=a.size):
                if not validate_morphism(u, a, t, CLS.HOM):
                    continue
                for v in itertools.product(range(t.size), repeat=b.size):
                    if not validate_morphism(v, b, t, CLS.HOM):
                        continue
                    if any(u[f.map[x]] != v[g.map[x]] for x in range(c.size)):
                        continue
                    mediating = [
                        h for h in itertools.product(range(t.size), repeat=p.size)
                        if validate_morphism(h, p, t, CLS.HOM)
                        and all(h[la.map[x]] == u[x] for x in range(a.size))
                        and all(h[lb.map[x]] == v[x] for x in range(b.size))
                    ]
                    assert len(mediating) == 1


def test_canonical_form_permutation_invariance(k3):
    for perm in itertools.permutations(range(3)):
        relabeled = digraph(3, {(perm[x], perm[y]) for x, y in k3.relation("E")})
        assert canonical_form(relabeled) == canonical_form(k3)


def test_canonical_form_separates_c6_from_triangles(c6, two_c3):
    assert canonical_form(c6) != canonical_form(two_c3)


def test_canonical_form_empty_structure():
    assert canonical_form(no_relation(0)) == b"0|E/2:"


def test_canonical_form_cap():
    with pytest.raises(CapExceededError):
        canonical_form(no_relation(9))


def test_canonical_form_agrees_with_brute_force_on_size_3_pairs():
    import random

    structures = list(all_small_digraphs(3))
    rng = random.Random(11)
    for _ in range(250):
        a, b = rng.choice(structures), rng.choice(structures)
        assert (canonical_form(a) == canonical_form(b)) == brute_isomorphic(a, b)


def test_canonical_form_agrees_with_brute_force_on_size_4_samples():
    import random

    rng = random.Random(13)
    for _ in range(30):
        arcs_a = {(rng.randrange(4), rng.randrange(4)) for _ in range(rng.randint(0, 8))}
        arcs_b = {(rng.randrange(4), rng.randrange(4)) for _ in range(rng.randint(0, 8))}
        a, b = digraph(4, arcs_a), digraph(4, arcs_b)
        assert (canonical_form(a) == canonical_form(b)) == brute_isomorphic(a, b)
        perm = list(range(4))
        rng.shuffle(perm)
        relabeled = digraph(4, {(perm[x], perm[y]) for x, y in arcs_a})
        assert canonical_form(relabeled) == canonical_form(a)


def test_canonical_representative_is_isomorphic_with_same_code():
    for a in all_small_digraphs(2):
        rep = canonical_representative(a)
        assert canonical_form(rep) == canonical_form(a)
        assert brute_isomorphic(rep, a)


def test_canonical_form_congruence_for_disjoint_union():
    small = [no_relation(1), digraph(1, {(0, 0)}), digraph(2, {(0, 1)}),
             cycle_sym(3), path_sym(3)]
    for a in small:
        for b in small:
            assert canonical_form(disjoint_union(a, b)) == canonical_form(
                disjoint_union(b, a)
            )
