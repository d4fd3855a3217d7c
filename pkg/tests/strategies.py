"""Random instances built on top of the library (graphs, groups, data)."""

import random

from dilacov.abelian import enumerate_subgroups, make_group, subgroup_intersection
from dilacov.dilation import validate_dilation
from dilacov.graph import build_graph

import oracles

GROUPS_16 = [f for f in oracles.groups_up_to(16)]


def random_group(rng: random.Random, max_order=16):
    return make_group(list(rng.choice([f for f in GROUPS_16 if _order(f) <= max_order])))


def _order(f):
    n = 1
    for d in f:
        n *= d
    return n


def random_graph(rng: random.Random, max_vertices=4, max_edges=5, legs=True, genus=True):
    nv, edges, lg = oracles.random_multigraph(rng, max_vertices, max_edges, legs)
    g = [rng.choice([0, 0, 1]) for _ in range(nv)] if genus else [0] * nv
    return build_graph(nv, edges, lg, g, [rng.randint(1, 3) for _ in edges])


def random_datum(rng: random.Random, G, group, expand=True):
    subs = enumerate_subgroups(group, max(64, group.order))
    assign = {}
    for v in G.vertices:
        assign[v] = rng.choice(subs)
    for e in G.edges:
        top = subgroup_intersection(assign[G.source(e)], assign[G.target(e)])
        K = rng.choice([H for H in subs if H.issubgroup(top)]) if expand else top
        assign[e[0]] = assign[e[1]] = K
    for h in G.legs:
        top = assign[G.root[h]]
        assign[h] = rng.choice([H for H in subs if H.issubgroup(top)]) if expand else top
    return validate_dilation(G, group, assign)
