from itertools import combinations

import pytest

from normtori.permgrp import (CapExceeded, CosetTable, Perm, PermGroup, a4_on_edges,
                              alternating_group, coset_action, cyclic_group, generate,
                              klein_in_s6, lemma1_block_embedding, lemma3_subgroup,
                              maximal_cyclic_reps, parse_cycles, subgroups_up_to_conjugacy,
                              sylow_subgroup, symmetric_group)


def P(text, n):
    return parse_cycles(text, n)


def dihedral4():
    return PermGroup.from_strings(["(1234)", "(13)"], 4)


def test_parse_examples():
    assert P("(1 2)(3 4)", 4).images == (2, 1, 4, 3)
    assert P("", 5).is_identity()
    assert P("(1 2 3)", 3).images == (2, 3, 1)
    assert P("(12)(34)", 4) == P("(1,2)(3,4)", 4)
    assert P("(1 10)", 10)(10) == 1


@pytest.mark.parametrize("bad", ["(1 1)", "(1 7)", "(1 2", "1 2)", "(a)"])
def test_parse_errors(bad):
    with pytest.raises(ValueError):
        parse_cycles(bad, 4)


def test_composition_convention():
    a, b = P("(12)", 3), P("(23)", 3)
    # left factor first: 1 -a-> 2 -b-> 3
    assert (a * b)(1) == 3
    assert a.compose(b)(1) == 2
    assert P("(12)(34)", 6) * P("(34)(56)", 6) == P("(12)(56)", 6)


def test_cycle_string_roundtrip():
    for s in ["(12)(34)", "(123)(456)(789)", "(147)(258)(369)"]:
        n = 9 if "9" in s else 4
        assert P(s, n).cycle_string() == s
    p = P("(1 2 3 4 5 6 7 8 9 10)", 10)
    assert parse_cycles(p.cycle_string(), 10) == p


def test_generate_examples():
    assert generate([P("(12)", 2)]).order == 2
    U = PermGroup.from_strings(["(12)(34)", "(13)(24)"], 4)
    assert U.order == 4 and U.is_regular()
    K = klein_in_s6()
    assert K.order == 4 and K.is_abelian() and not K.is_cyclic()
    assert all(g.order() <= 2 for g in K.elements)


def test_generate_idempotent():
    for G in [symmetric_group(4), klein_in_s6(), lemma3_subgroup(3)]:
        H = PermGroup(G.elements, G.degree)
        assert {g.images for g in H.elements} == {g.images for g in G.elements}


def test_cap():
    with pytest.raises(CapExceeded):
        generate(symmetric_group(5).generators, cap=100)
    with pytest.raises(CapExceeded):
        lemma1_block_embedding(8, 2)


def test_identity_first_and_closure():
    G = symmetric_group(4)
    els = G.elements
    assert els[0].is_identity()
    s = {g.images for g in els}
    assert all((a * b).images in s for a in els for b in els)
    assert all(a.inverse().images in s for a in els)


def test_coset_action_examples():
    G = symmetric_group(3)
    ct = coset_action(G, G)
    assert ct.index == 1 and all(p.is_identity() for p in ct.action)
    ct = coset_action(G, PermGroup([], 3))
    assert ct.index == 6
    assert PermGroup(ct.action, 6).is_regular()
    H = PermGroup.from_strings(["(12)"], 3)
    ct = coset_action(G, H)
    assert ct.index == 3
    act = PermGroup(ct.action, 3)
    assert act.order == 6 and act.is_transitive()
    # the orbit of the identity coset under (123) visits all three cosets
    c = P("(123)", 3)
    seen = {ct.coset_of(c ** k) for k in range(3)}
    assert seen == {1, 2, 3}
    with pytest.raises(ValueError):
        CosetTable(H, G)


def test_coset_table_lagrange_and_homomorphism():
    for G in [symmetric_group(4), a4_on_edges(), dihedral4()]:
        for H in subgroups_up_to_conjugacy(G):
            ct = CosetTable(G, H)
            assert ct.index * H.order == G.order
            for g in G.elements[:10]:
                for h in G.elements[:10]:
                    assert ct.permutation(g.compose(h)) == ct.permutation(g).compose(ct.permutation(h))


def test_maximal_cyclic_examples():
    V = PermGroup.from_strings(["(12)(34)", "(13)(24)"], 4)
    assert sorted(C.order for C in maximal_cyclic_reps(V)) == [2, 2, 2]
    assert [C.order for C in maximal_cyclic_reps(cyclic_group(6))] == [6]
    assert sorted(C.order for C in maximal_cyclic_reps(symmetric_group(3))) == [2, 3]


def _conj(S, x):
    xi = x.inverse()
    return frozenset((x.compose(Perm(s)).compose(xi)).images for s in S)


@pytest.mark.parametrize("G", [symmetric_group(3), symmetric_group(4), alternating_group(4),
                               dihedral4(), cyclic_group(6), a4_on_edges()])
def test_maximal_cyclic_cover_every_element(G):
    reps = maximal_cyclic_reps(G)
    sets = [frozenset(g.images for g in C.elements) for C in reps]
    conj = {_conj(S, x) for S in sets for x in G.elements}
    for g in G.elements:
        assert any(g.images in S for S in conj)
    # no two representatives are conjugate
    assert len({frozenset(_conj(S, x) for x in G.elements) for S in sets}) == len(sets)


def _brute_subgroups(G):
    """All subgroups via closures of pairs of elements (enough for these small groups)."""
    els = G.elements
    found = set()
    for a, b in combinations(els, 2):
        found.add(frozenset(g.images for g in PermGroup([a, b], G.degree).elements))
    found.add(frozenset(g.images for g in PermGroup([els[0]], G.degree).elements))
    return found


def _brute_subset_subgroups(G):
    """Every subset of G closed under the product (tiny groups only)."""
    els = G.elements
    out = set()
    for mask in range(1, 1 << len(els)):
        S = [els[i] for i in range(len(els)) if mask >> i & 1]
        imgs = {g.images for g in S}
        if els[0].images in imgs and all((a * b).images in imgs for a in S for b in S):
            out.add(frozenset(imgs))
    return out


def _classes(G, subs):
    return {frozenset(_conj(S, x) for x in G.elements) for S in subs}


@pytest.mark.parametrize("G,expected", [
    (PermGroup.from_strings(["(12)(34)", "(13)(24)"], 4), 5),
    (cyclic_group(4), 3),
    (symmetric_group(3), 4),
    (dihedral4(), 8),
    (alternating_group(4), 5),
    (symmetric_group(4), 11),
    (cyclic_group(6), 4),
])
def test_subgroups_up_to_conjugacy(G, expected):
    reps = subgroups_up_to_conjugacy(G)
    assert len(reps) == expected
    brute = _brute_subset_subgroups(G) if G.order <= 8 else _brute_subgroups(G)
    assert len(_classes(G, brute)) == expected
    rep_sets = [frozenset(g.images for g in H.elements) for H in reps]
    assert _classes(G, rep_sets) == _classes(G, brute)


def test_sylow_examples():
    A4 = alternating_group(4)
    P2 = sylow_subgroup(A4, 2)
    V = PermGroup.from_strings(["(12)(34)", "(13)(24)"], 4)
    assert {g.images for g in P2.elements} == {g.images for g in V.elements}
    assert sylow_subgroup(cyclic_group(6), 3).order == 3
    assert sylow_subgroup(symmetric_group(4), 2).order == 8
    with pytest.raises(ValueError):
        sylow_subgroup(cyclic_group(6), 5)


def test_lemma1_block_embedding_examples():
    U = lemma1_block_embedding(2, 2)
    assert U.generator_strings() == ["(12)(34)"] and U.order == 2
    U = lemma1_block_embedding(2, 3)
    assert U.generator_strings() == ["(12)(34)(56)"] and U.order == 2
    U = lemma1_block_embedding(3, 2)
    assert U.generator_strings() == ["(123)(456)", "(12)(45)"] and U.order == 6
    assert lemma1_block_embedding(4, 3).order == 24
    with pytest.raises(ValueError):
        lemma1_block_embedding(1, 3)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_lemma3_subgroup_regular(m):
    U = lemma3_subgroup(m)
    assert U.order == m * m and U.is_abelian() and U.is_transitive()
    assert U.stabilizer(1).order == 1
    assert max(g.order() for g in U.elements) == m


def test_lemma3_generators_verbatim():
    assert lemma3_subgroup(2).generator_strings() == ["(12)(34)", "(13)(24)"]
    assert lemma3_subgroup(3).generator_strings() == ["(123)(456)(789)", "(147)(258)(369)"]


def test_a4_edge_embedding_contains_klein():
    A = a4_on_edges()
    assert A.order == 12
    K = klein_in_s6()
    assert K.is_subgroup_of(A)
    assert {g.images for g in sylow_subgroup(A, 2).elements} == {g.images for g in K.elements}
    assert [g.cycle_string() for g in A.generators] == ["(163)(254)", "(145)(236)"]
