import random
from math import prod

import pytest
from hypothesis import given, settings, strategies as st

from dilacov.abelian import enumerate_subgroups, make_group, parse_subgroup, subgroup_intersection, subgroup_sum
from dilacov.cohomology import (
    FinitePresentation,
    H1Classes,
    brute_force_cohomology,
    build_cochain_complex,
    cohomology_groups,
    datum_from_dilation,
    enumerate_h1_classes,
    factors_from_torsion,
    format_factors,
    quotient_graph,
    reduced_complex,
    relative_and_reduced,
    trivial_gdatum,
    verify_les,
)
from dilacov.dilation import trivial_datum, validate_dilation
from dilacov.errors import DomainError, ResourceLimitError
from dilacov.graph import build_graph, edge_maximal_subgraph, load_graph, named_graph

import oracles
from strategies import random_datum, random_graph, random_group

DATA = __import__("pathlib").Path(__file__).resolve().parent.parent / "data"
KLEIN = make_group([2, 2])
Z2 = make_group([2])


def groups(D):
    res = cohomology_groups(datum_from_dilation(D))
    return res.h0_factors, res.h1_factors


def pinned(G, group, vertex_groups):
    assign = {v: vertex_groups[v] for v in G.vertices}
    for e in G.edges:
        K = subgroup_intersection(assign[G.source(e)], assign[G.target(e)])
        assign[e[0]] = assign[e[1]] = K
    for h in G.legs:
        assign[h] = assign[G.root[h]]
    return validate_dilation(G, group, assign)


def test_presentation_of_klein():
    P = FinitePresentation(2, [[2, 0], [0, 2]])
    assert P.factors == (2, 2) and P.order == 4
    Q = FinitePresentation(2, [[4, 0], [0, 6]])
    assert Q.factors == (2, 12)
    for c in Q.elements():
        assert Q.normal(Q.lift(c)) == c
    with pytest.raises(DomainError):
        FinitePresentation(2, [[2, 0]])


def test_factors_from_torsion():
    prof = oracles.profile_of_factors([2, 12], 24)
    assert factors_from_torsion(24, lambda n: prof[n]) == [2, 12]
    assert factors_from_torsion(1, lambda n: 1) == []


def test_format():
    assert format_factors([]) == "0"
    assert format_factors([2, 2]) == "Z/2 x Z/2"


def test_trivial_theta_over_klein():
    G = named_graph("theta")
    res = cohomology_groups(trivial_gdatum(G, KLEIN))
    assert res.h0_factors == [2, 2] and res.h1_factors == [2, 2]
    assert res.checked_by_enumeration


def test_tree_file_vanishes():
    G = load_graph(DATA / "tree.graph")
    for group in (Z2, KLEIN, make_group([6])):
        for H in enumerate_subgroups(group):
            D = pinned(G, group, {v: H for v in G.vertices})
            assert groups(D)[1] == []


def test_theta_mixed_groups():
    # D(u) = H1, D(v) = H2 on the theta: H0 = G/(H1 n H2) = G, H1 = G/(H1+H2) = 0
    G = named_graph("theta")
    H1, H2 = parse_subgroup(KLEIN, "<10>"), parse_subgroup(KLEIN, "<01>")
    assert groups(pinned(G, KLEIN, {0: H1, 1: H2})) == ([2, 2], [])
    assert groups(pinned(G, KLEIN, {0: H1, 1: H1})) == ([2], [2])


def test_alternating_chain_has_large_h0():
    # chain of 4 vertices over Z/6 with groups <3>, <2>, <3>, <2>: every C(e) is G
    Z6 = make_group([6])
    G = build_graph(4, [(0, 1), (1, 2), (2, 3)], genus=[0] * 4)
    a, b = parse_subgroup(Z6, "<3>"), parse_subgroup(Z6, "<2>")
    D = pinned(G, Z6, {0: a, 1: b, 2: a, 3: b})
    h0, h1 = groups(D)
    assert h1 == []
    assert h0 == [6, 6]


def test_bound_for_classes():
    G = named_graph("theta4")
    with pytest.raises(ResourceLimitError):
        H1Classes(trivial_datum(G, KLEIN), max_classes=10)


def test_representatives_are_normalized():
    G = named_graph("theta3")
    cl = H1Classes(trivial_datum(G, Z2))
    assert cl.count == 4
    for i in range(cl.count):
        eta = cl.representative_of(i)
        assert cl.class_of(eta) == i
        for e in G.edges:
            if e not in cl.cotree:
                assert eta[e] == ((0,), (0,))
            else:
                assert eta[e][1] == (0,)


def test_coboundaries_are_zero():
    rng = random.Random(3)
    G = named_graph("dumbbell_leg")
    for _ in range(20):
        D = random_datum(rng, G, KLEIN)
        cl = H1Classes(D)
        for _ in range(5):
            xi = {v: rng.choice(KLEIN.elements) for v in G.vertices}
            assert cl.class_of(cl.coboundary(xi)) == 0
            i = rng.randrange(cl.count)
            eta = cl.representative_of(i)
            shifted = {e: (KLEIN.add(eta[e][0], cl.coboundary(xi)[e][1]), eta[e][1]) for e in G.edges}
            assert cl.class_of(shifted) == i


def test_quotient_graph_shape():
    G = named_graph("dumbbell_leg")
    Q, vmap, emap = quotient_graph(G, edge_maximal_subgraph(G, [0, 1]))
    assert Q.vertices == (0, 1) and len(Q.edges) == 2 and Q.legs == ()
    assert vmap == {0: 0, 1: 0, 2: 1}


def test_empty_subgraph_gives_reduced_cohomology():
    G = named_graph("theta")
    A = trivial_gdatum(G, Z2)
    rep = relative_and_reduced(A, frozenset())
    assert rep.ok
    # the collapsed graph has an isolated extra vertex carrying G
    assert rep.relative_h0 == [2] and rep.relative_h1 == [2]


def test_les_examples():
    G = named_graph("theta")
    A = trivial_gdatum(G, Z2)
    sub = frozenset({0, 1, 2, 3})
    rep = verify_les(A, sub)
    assert rep.ok
    assert rep.orders == {"H0(rel)": 1, "H0(G)": 2, "H0(sub)": 2, "H1(rel)": 2, "H1(G)": 2, "H1(sub)": 1}
    assert verify_les(A, frozenset(range(G.n))).ok
    T = build_graph(3, [(0, 1), (1, 2)], genus=[0] * 3)
    rep = verify_les(trivial_gdatum(T, Z2), frozenset({0, 2}))
    assert rep.ok and rep.orders["H0(sub)"] == 4 and rep.orders["H0(G)"] == 2


def _oracle_profiles(D):
    vg = {v: D.assign[v].element_set for v in D.graph.vertices}
    return oracles.coset_cohomology(D.graph, D.group.invariant_factors, vg)


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10**9))
def test_matches_coset_oracle(seed):
    rng = random.Random(seed)
    G = random_graph(rng, max_vertices=3, max_edges=3)
    group = random_group(rng, 8)
    D = random_datum(rng, G, group)
    h0, h1 = groups(D)
    o0, p0, o1, p1 = _oracle_profiles(D)
    assert prod(h0) == o0 and prod(h1) == o1
    assert oracles.profile_of_factors(h0, o0) == p0
    assert oracles.profile_of_factors(h1, o1) == p1


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_edge_groups_do_not_matter(seed):
    rng = random.Random(seed)
    G = random_graph(rng)
    group = random_group(rng, 16)
    D = random_datum(rng, G, group)
    E = pinned(G, group, {v: D.assign[v] for v in G.vertices})
    assert groups(D) == groups(E)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_loop_multiplies_h1(seed):
    rng = random.Random(seed)
    nv, edges, legs = oracles.random_multigraph(rng, 3, 4)
    group = random_group(rng, 16)
    subs = enumerate_subgroups(group)
    vg = {v: rng.choice(subs) for v in range(nv)}
    v = rng.randrange(nv)
    G = build_graph(nv, edges, legs, [0] * nv)
    G2 = build_graph(nv, edges + [(v, v)], legs, [0] * nv)
    a = prod(groups(pinned(G, group, vg))[1])
    b = prod(groups(pinned(G2, group, vg))[1])
    assert b == a * vg[v].index


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_refinement_is_surjective_on_h1(seed):
    rng = random.Random(seed)
    G = random_graph(rng, max_vertices=3, max_edges=4)
    group = random_group(rng, 12)
    D = random_datum(rng, G, group)
    subs = enumerate_subgroups(group)
    coarse = {v: subgroup_sum(D.assign[v], rng.choice(subs)) for v in G.vertices}
    E = pinned(G, group, coarse)
    fine, big = H1Classes(D), H1Classes(E)
    hit = {big.class_of(fine.representative_of(i)) for i in range(fine.count)}
    assert hit == set(range(big.count))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_subgraph_cohomology(seed):
    rng = random.Random(seed)
    G = random_graph(rng, max_vertices=4, max_edges=5)
    group = random_group(rng, 12)
    H = rng.choice(enumerate_subgroups(group))
    chosen = [v for v in G.vertices if rng.random() < 0.6]
    sub = edge_maximal_subgraph(G, chosen)
    # edges leaving the subgraph get D(s) & D(t) so that the datum is valid; C(e) is G either way
    D = pinned(G, group, {v: (H if v in sub else group.whole) for v in G.vertices})
    h0, h1 = groups(D)
    # ordinary cohomology of the subgraph with coefficients in G/H
    nv = len(chosen)
    ne = len({G.edge_of(h) for h in sub if h not in G.vertex_set and not G.is_leg(h)})
    ncomp = _count_components(G, sub)
    q = H.index
    assert prod(h0) == q ** ncomp
    assert prod(h1) == q ** (ne - nv + ncomp)
    assert sorted(h1) == sorted(_power(_quotient_factors(group, H), ne - nv + ncomp))


def _count_components(G, cells):
    vs = [c for c in cells if c in G.vertex_set]
    parent = {v: v for v in vs}

    def find(v):
        while parent[v] != v:
            v = parent[v]
        return v

    for h in cells:
        if h in G.vertex_set or G.is_leg(h):
            continue
        a, b = find(G.root[h]), find(G.root[G.involution[h]])
        parent[a] = b
    return len({find(v) for v in vs})


def _quotient_factors(group, H):
    # brute-force invariant factors of G/H through the torsion profile of the coset group
    cosets = {frozenset(oracles.add(group.invariant_factors, g, h) for h in H.element_set) for g in group.elements}
    n = len(cosets)

    def count(k):
        return sum(1 for c in cosets
                   if tuple(k * x % d for x, d in zip(min(c), group.invariant_factors)) in H.element_set)

    return factors_from_torsion(n, count)


def _power(factors, k):
    # invariant factors of a k-fold product of a group with the given factors
    out = []
    for f in factors:
        out += [f] * k
    return out


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_relative_equals_reduced(seed):
    rng = random.Random(seed)
    G = random_graph(rng, max_vertices=4, max_edges=4, legs=False)
    group = random_group(rng, 8)
    D = random_datum(rng, G, group)
    vs = [v for v in G.vertices if rng.random() < 0.5]
    sub = set(vs) | {h for e in G.edges if G.source(e) in vs and G.target(e) in vs and rng.random() < 0.7
                     for h in e}
    A = datum_from_dilation(D)
    assert relative_and_reduced(A, frozenset(sub), strict=False).ok
    assert verify_les(A, frozenset(sub)).ok


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_structure_agrees_with_enumeration(seed):
    rng = random.Random(seed)
    G = random_graph(rng, max_vertices=4, max_edges=4)
    group = random_group(rng, 16)
    D = random_datum(rng, G, group)
    cx = build_cochain_complex(datum_from_dilation(D))
    if cx.C0.order <= 20000 and cx.C1.order <= 20000:
        assert brute_force_cohomology(cx) == (cx.h0_factors(), cx.h1_factors())
    red = reduced_complex(datum_from_dilation(D))
    if red.C0.order <= 20000 and red.C1.order <= 20000:
        assert brute_force_cohomology(red) == (red.h0_factors(), red.h1_factors())


def test_enumerate_classes_result():
    res = enumerate_h1_classes(trivial_datum(named_graph("theta"), KLEIN))
    assert res.class_count == 4 and res.checked_by_enumeration
    assert res.class_of(res.representative_of(3)) == 3
