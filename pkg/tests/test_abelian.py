import pytest
from hypothesis import given, settings, strategies as st

from dilacov.abelian import (
    Group,
    canonical_coset_rep,
    enumerate_subgroups,
    make_group,
    parse_group,
    parse_subgroup,
    quotient_presentation,
    subgroup_intersection,
    subgroup_sum,
)
from dilacov.errors import DomainError, FormatError, ResourceLimitError

import oracles

SMALL = [g for g in oracles.groups_up_to(16)]
KLEIN = make_group([2, 2])


def test_make_group_examples():
    assert make_group([2, 2]).invariant_factors == (2, 2)
    assert make_group([2, 2]).order == 4
    assert make_group([]).order == 1
    assert make_group([4, 6]).invariant_factors == (2, 12)
    assert make_group([1, 1, 5]).invariant_factors == (5,)


@pytest.mark.parametrize("bad", [[0], [-3], [2, 0]])
def test_make_group_rejects_nonpositive(bad):
    with pytest.raises(FormatError):
        make_group(bad)


def test_group_needs_divisibility_chain():
    with pytest.raises(DomainError):
        Group((4, 6))


@pytest.mark.parametrize("text,expected", [
    ("2,2", (2, 2)), ("Z2xZ2", (2, 2)), ("Z6", (6,)), ("Z/4 x Z/2", (2, 4)), ("6", (6,)), ("1", ()),
])
def test_parse_group(text, expected):
    assert parse_group(text).invariant_factors == expected


def test_parse_group_garbage():
    with pytest.raises(FormatError):
        parse_group("Q8")


def test_klein_has_five_subgroups():
    subs = enumerate_subgroups(KLEIN)
    assert len(subs) == 5
    assert [H.order for H in subs] == [1, 2, 2, 2, 4]
    gens = {frozenset(H.elements) for H in subs if H.order == 2}
    assert gens == {frozenset({(0, 0), g}) for g in [(1, 0), (0, 1), (1, 1)]}


def test_trivial_group_subgroups():
    subs = enumerate_subgroups(make_group([]))
    assert len(subs) == 1 and subs[0].order == 1


def test_z6_subgroups():
    subs = enumerate_subgroups(make_group([6]))
    assert [H.order for H in subs] == [1, 2, 3, 6]
    assert len(oracles.all_subgroups((6,))) == 4


def test_subgroup_bound():
    with pytest.raises(ResourceLimitError, match="64"):
        enumerate_subgroups(make_group([2, 2, 2, 2, 2, 2, 2]))
    assert len(enumerate_subgroups(make_group([128]), max_order=128)) == 8


@pytest.mark.parametrize("factors", [f for f in SMALL if len(f) <= 3])
def test_subgroups_match_closure_oracle(factors):
    G = make_group(list(factors))
    ours = {frozenset(H.elements) for H in enumerate_subgroups(G)}
    assert ours == oracles.all_subgroups(factors)
    assert len(ours) == len(enumerate_subgroups(G))


def test_sum_and_intersection_examples():
    H1, H2 = parse_subgroup(KLEIN, "<10>"), parse_subgroup(KLEIN, "<01>")
    assert subgroup_sum(H1, H2) == KLEIN.whole
    assert subgroup_intersection(H1, H2) == KLEIN.trivial
    assert subgroup_sum(H1, KLEIN.trivial) == H1
    assert subgroup_intersection(H1, KLEIN.whole) == H1
    Z12 = make_group([12])
    a, b = parse_subgroup(Z12, "<2>"), parse_subgroup(Z12, "<3>")
    assert subgroup_sum(a, b) == Z12.whole
    assert subgroup_intersection(a, b) == parse_subgroup(Z12, "<6>")
    assert set(subgroup_intersection(a, b).elements) == set(a.elements) & set(b.elements)
    assert subgroup_sum(a, b).element_set == oracles.closure((12,), list(a.elements) + list(b.elements))


def test_mismatched_parents():
    H = parse_subgroup(KLEIN, "<10>")
    K = make_group([4]).whole
    with pytest.raises(DomainError):
        subgroup_sum(H, K)
    with pytest.raises(DomainError):
        subgroup_intersection(H, K)


def test_quotient_examples():
    Z4 = make_group([4])
    Q = quotient_presentation(Z4, parse_subgroup(Z4, "<2>"))
    assert Q.quotient_factors == (2,)
    assert quotient_presentation(KLEIN, KLEIN.whole).quotient_factors == ()
    H3 = parse_subgroup(KLEIN, "<11>")
    Q3 = quotient_presentation(KLEIN, H3)
    assert Q3.quotient_factors == (2,)
    assert Q3.project((1, 0)) == Q3.project((0, 1)) == (1,)
    assert Q3.project((1, 1)) == (0,)


def test_coset_rep_examples():
    Z4 = make_group([4])
    Q = quotient_presentation(Z4, parse_subgroup(Z4, "<2>"))
    assert canonical_coset_rep(Q, (3,)) == (1,)
    QG = quotient_presentation(KLEIN, KLEIN.whole)
    assert all(canonical_coset_rep(QG, g) == (0, 0) for g in KLEIN.elements)
    Q1 = quotient_presentation(KLEIN, parse_subgroup(KLEIN, "<10>"))
    assert canonical_coset_rep(Q1, (1, 1)) == (0, 1)
    assert min(oracles.coset((2, 2), {(0, 0), (1, 0)}, (1, 1))) == (0, 1)


def test_subgroup_literals():
    assert parse_subgroup(KLEIN, "<10;01>") == KLEIN.whole
    assert parse_subgroup(KLEIN, "<1,0>") == parse_subgroup(KLEIN, "<10>")
    assert parse_subgroup(KLEIN, "0") == KLEIN.trivial
    with pytest.raises(FormatError):
        parse_subgroup(KLEIN, "10")


group_and_pair = st.sampled_from([f for f in SMALL if f]).flatmap(
    lambda f: st.tuples(
        st.just(f),
        st.integers(0, 10**6),
        st.integers(0, 10**6),
    )
)


@settings(max_examples=150, deadline=None)
@given(group_and_pair)
def test_lattice_identities(data):
    f, i, j = data
    G = make_group(list(f))
    subs = enumerate_subgroups(G)
    H, K = subs[i % len(subs)], subs[j % len(subs)]
    S, I = subgroup_sum(H, K), subgroup_intersection(H, K)
    assert S.order * I.order == H.order * K.order
    assert S in subs and I in subs
    assert I.element_set == H.element_set & K.element_set
    assert (H == K) == (H.element_set == K.element_set)
    assert H.order * H.index == G.order


@settings(max_examples=150, deadline=None)
@given(group_and_pair, st.integers(0, 10**6), st.integers(0, 10**6))
def test_quotient_is_a_homomorphism(data, a, b):
    f, i, _ = data
    G = make_group(list(f))
    subs = enumerate_subgroups(G)
    H = subs[i % len(subs)]
    Q = quotient_presentation(G, H)
    els = G.elements
    g, h = els[a % len(els)], els[b % len(els)]
    Qg = Q.quotient
    assert Q.project(G.add(g, h)) == Qg.add(Q.project(g), Q.project(h))
    assert (Q.project(g) == Q.project(h)) == (G.sub(g, h) in H)
    assert Q.order == H.index
    for q in Qg.elements:
        assert Q.project(Q.canonical_lift(q)) == q
    r = canonical_coset_rep(Q, g)
    assert canonical_coset_rep(Q, r) == r
    assert r == min(oracles.coset(f, H.element_set, g))
    assert Q.canonical_lift(Q.project(g)) == r
