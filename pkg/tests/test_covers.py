import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dilacov.abelian import make_group, parse_subgroup
from dilacov.cohomology import H1Classes
from dilacov.covers import (
    Cover,
    build_cover,
    certify,
    class_of_cover,
    connectivity,
    contract_cover,
    cover_from_dict,
    cover_to_dict,
    covers_isomorphic,
    enumerate_covers,
    oracle_check,
    stabilize_cover,
    verify_unramified,
)
from dilacov.dilation import trivial_datum, validate_dilation
from dilacov.errors import CertificationError, DomainError
from dilacov.graph import build_graph, components, euler_and_genus, named_graph

import oracles
from strategies import random_datum, random_graph

KLEIN = make_group([2, 2])
Z2, Z3 = make_group([2]), make_group([3])


def full_datum(G, group, H):
    return validate_dilation(G, group, {c: H for c in range(G.n)})


def test_trivial_theta_cover_over_klein():
    D = trivial_datum(named_graph("theta"), KLEIN)
    cl = H1Classes(D)
    sizes = []
    for i in range(cl.count):
        c = certify(build_cover(D, cl.representative_of(i)))
        assert len(c.total.vertices) == 8 and len(c.total.edges) == 8
        sizes.append(len(components(c.total)))
    # zero class is four copies of the base; every other class is two copies of a 4-cycle
    assert sorted(sizes) == [2, 2, 2, 4]


def test_double_cover_of_loop():
    G = named_graph("loop")
    D = trivial_datum(G, Z2)
    c = certify(build_cover(D, {(1, 2): ((1,), (0,))}))
    assert len(components(c.total)) == 1
    assert c.total.edges and not any(c.total.is_loop(e) for e in c.total.edges)
    assert class_of_cover(c).class_index == 1


def test_metric_is_divided_by_degree():
    G = named_graph("theta")
    H = parse_subgroup(Z2, "<1>")
    D = validate_dilation(G, Z2, {0: H, 1: H, 2: H, 3: H})
    c = build_cover(D)
    # the dilated edge has one lift of length 1/2, the other edge two lifts of length 1
    lens = sorted(c.total.lengths.values())
    assert lens == [Fraction(1, 2), Fraction(1), Fraction(1)]
    for e, ell in c.total.lengths.items():
        assert ell * c.degrees[e[0]] == G.lengths[G.edge_of(c.projection[e[0]])]


def test_certify_rejects_broken_action():
    D = trivial_datum(named_graph("theta"), Z2)
    c = build_cover(D)
    perm = list(c.action[0])
    a, b = c.fibers[2]
    perm[a], perm[b] = perm[b], perm[a]  # the half-edges no longer follow their roots
    bad = Cover(c.base, c.total, c.projection, (tuple(perm),), c.degrees, c.datum)
    with pytest.raises(CertificationError):
        certify(bad)


def test_certify_rejects_broken_projection():
    D = trivial_datum(named_graph("theta"), Z2)
    c = build_cover(D)
    proj = list(c.projection)
    proj[c.fibers[2][0]] = 4
    bad = Cover(c.base, c.total, tuple(proj), c.action, c.degrees, c.datum)
    with pytest.raises(CertificationError):
        certify(bad)


def test_unramified_needs_admissible():
    G = named_graph("theta")
    H = parse_subgroup(KLEIN, "<10>")
    D = validate_dilation(G, KLEIN, {0: H, 1: H})
    with pytest.raises(DomainError):
        build_cover(D, unramified=True)


def test_connectivity_witness():
    G = named_graph("theta")
    H = parse_subgroup(KLEIN, "<10>")
    D = validate_dilation(G, KLEIN, {c: H for c in range(G.n)})
    cl = H1Classes(D)
    reports = [connectivity(build_cover(D, cl.representative_of(i)), cl, i) for i in range(cl.count)]
    comps = sorted(r.components for r in reports)
    assert comps == [1, 2]
    zero = reports[0]
    assert zero.components == 2 and zero.witnesses == [H]
    assert reports[1].connected and "not induced" in reports[1].describe()


def test_riemann_hurwitz_on_admissible_cover():
    G = named_graph("dumbbell_leg")
    D = full_datum(G, Z3, Z3.whole)
    c = build_cover(D, genus="admissible", unramified=True)
    rr = verify_unramified(c)
    assert rr.unramified and rr.global_rh
    assert rr.chi_total == 3 * rr.chi_base
    pulled = build_cover(D, genus="pullback")
    assert not verify_unramified(pulled).unramified


def test_isomorphism_search():
    D = trivial_datum(named_graph("theta"), Z2)
    cl = H1Classes(D)
    c0, c1 = build_cover(D, cl.representative_of(0)), build_cover(D, cl.representative_of(1))
    assert not covers_isomorphic(c0, c1)
    xi = {0: (1,), 1: (0,)}
    eta = {e: (Z2.add(a, b), t) for (e, (a, t)), b in
           zip(cl.representative_of(1).items(), [v[1] for v in cl.coboundary(xi).values()])}
    c1b = build_cover(D, eta)
    res = covers_isomorphic(c1, c1b)
    assert res and res.witness is not None


def test_cover_file_round_trip():
    D = full_datum(named_graph("dumbbell_leg"), Z3, Z3.whole)
    c = build_cover(D, genus="admissible")
    text = json.dumps(cover_to_dict(c))
    back = cover_from_dict(json.loads(text))
    assert back.datum == c.datum and back.total == c.total
    raw = json.loads(text)
    raw["degrees"][0] = 7
    with pytest.raises(CertificationError):
        cover_from_dict(raw)


@pytest.mark.parametrize("p,expand", [(2, False), (3, False), (3, True), (5, False)])
def test_dumbbell_counts_match_oracle(p, expand):
    G = named_graph("dumbbell_leg")
    grp = make_group([p])
    cat = enumerate_covers(G, grp, "unramified", expand_edge_groups=expand)
    total, per = oracles.count_unramified_covers(G, (p,), expand)
    assert cat.total == total
    assert sorted(cat.class_counts) == sorted(per)


def test_klein_catalog_totals():
    cat = enumerate_covers(named_graph("theta"), KLEIN, "all")
    assert cat.total == 97 and cat.connected == 75
    assert len(cat.data) == 76


def test_contraction_transports_unramified():
    G = named_graph("dumbbell_leg")
    cat = enumerate_covers(G, Z3, "unramified", keep_covers=True)
    for row in cat.rows[:8]:
        for e in G.edges:
            c2 = contract_cover(row.cover, [e])
            assert verify_unramified(c2).unramified
            assert euler_and_genus(c2.total)[1] == euler_and_genus(row.cover.total)[1]


def test_stabilize_cover_of_tail():
    # dumbbell with a genus-0 tail hanging off the middle vertex
    G = build_graph(4, [(0, 0), (0, 1), (1, 2), (2, 2), (1, 3)], legs=[1],
                    genus=[0, 0, 0, 0], lengths=[1, 1, 1, 1, 2])
    cat = enumerate_covers(G, Z3, "unramified", keep_covers=True)
    base = named_graph("dumbbell_leg")
    ref = enumerate_covers(base, Z3, "unramified")
    seen = set()
    for row in cat.rows:
        c = stabilize_cover(row.cover)
        assert c.base.same_structure(base)
        k = class_of_cover(c).class_index
        seen.add((c.datum.key(), k))
    expect = {(r.datum.key(), r.class_index) for r in ref.rows}
    assert seen == expect


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_class_does_not_depend_on_basepoints(seed):
    rng = random.Random(seed)
    G = random_graph(rng, max_vertices=3, max_edges=4)
    grp = rng.choice([Z2, Z3, KLEIN, make_group([4])])
    D = random_datum(rng, G, grp)
    cl = H1Classes(D)
    i = rng.randrange(cl.count)
    c = certify(build_cover(D, cl.representative_of(i)))
    bp = {v: rng.choice(c.fibers[v]) for v in G.vertices}
    bp.update({e: rng.choice(c.fibers[e[0]]) for e in G.edges})
    assert class_of_cover(c, bp, cl).class_index == i


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_oracle_on_random_small_data(seed):
    rng = random.Random(seed)
    G = random_graph(rng, max_vertices=2, max_edges=3, legs=False)
    grp = rng.choice([Z2, Z3, KLEIN])
    D = random_datum(rng, G, grp)
    rep = oracle_check(D, vary_shifts=rng.random() < 0.3)
    assert rep.ok, rep.detail
    assert rep.iso_classes == rep.h1_order
