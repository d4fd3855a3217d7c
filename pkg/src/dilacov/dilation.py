"""Dilation data on graphs and the equivalent stratifications.

A dilation datum assigns a subgroup ``D(x)`` of ``G`` to every cell, with
``D(h) <= D(root(h))`` and equal groups on both halves of an edge.  For an
edge ``e`` the group ``C(e) = D(s(e)) + D(t(e))`` is what the cohomology
sees; the edge's own group only matters for covers and admissibility.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .abelian import (
    DEFAULT_MAX_ORDER,
    Group,
    Subgroup,
    enumerate_subgroups,
    parse_group,
    parse_subgroup,
    subgroup_intersection,
    subgroup_sum,
)
from .errors import DomainError, FormatError, ResourceLimitError, ValidationError
from .graph import Graph

DEFAULT_MAX_DATA = 200_000


@dataclass(frozen=True, eq=False)
class DilationDatum:
    graph: Graph
    group: Group
    assign: tuple[Subgroup, ...]

    def __getitem__(self, cell: int) -> Subgroup:
        return self.assign[cell]

    @cached_property
    def vertex_sum(self) -> dict:
        """``C(e)`` for every edge."""
        G = self.graph
        return {e: subgroup_sum(self.assign[G.source(e)], self.assign[G.target(e)]) for e in G.edges}

    def C(self, e) -> Subgroup:
        return self.vertex_sum[e]

    def key(self):
        return tuple(H.basis for H in self.assign)

    def __eq__(self, other):
        return (isinstance(other, DilationDatum) and self.group == other.group
                and self.graph == other.graph and self.key() == other.key())

    def __hash__(self):
        return hash(self.key())

    def vertex_pattern(self) -> tuple[str, ...]:
        return tuple(self.assign[v].label() for v in self.graph.vertices)

    def describe(self) -> str:
        """Compact text such as ``v0=<10> v1=0 e2=0``; trivial legs are skipped."""
        G = self.graph
        parts = [f"v{v}={self.assign[v].label()}" for v in G.vertices]
        parts += [f"e{e[0]}={self.assign[e[0]].label()}" for e in G.edges]
        parts += [f"l{h}={self.assign[h].label()}" for h in G.legs if self.assign[h].order > 1]
        return " ".join(parts)

    def is_trivial(self) -> bool:
        return all(H.order == 1 for H in self.assign)


def trivial_datum(G: Graph, group: Group) -> DilationDatum:
    return DilationDatum(G, group, tuple(group.trivial for _ in range(G.n)))


def validate_dilation(G: Graph, group: Group, raw) -> DilationDatum:
    """``raw`` maps cells to subgroups (dict or full list); omitted cells are 0."""
    if isinstance(raw, DilationDatum):
        raw = dict(enumerate(raw.assign))
    if not isinstance(raw, dict):
        raw = dict(enumerate(raw))
    bad = []
    assign = []
    for c in range(G.n):
        H = raw.get(c, group.trivial)
        if not isinstance(H, Subgroup) or H.group != group:
            bad.append(f"cell {c}: subgroup does not belong to {group}")
            H = group.trivial
        assign.append(H)
    for c in raw:
        if not 0 <= c < G.n:
            bad.append(f"cell {c}: no such cell")
    for h in G.half_edges:
        if not assign[h].issubgroup(assign[G.root[h]]):
            bad.append(f"cell {h}: D(h) not contained in D(root(h)) at vertex {G.root[h]}")
        i = G.involution[h]
        if h < i and assign[h] != assign[i]:
            bad.append(f"cell {h}: edge halves {h},{i} carry different groups")
    if bad:
        raise ValidationError("dilation datum", bad)
    return DilationDatum(G, group, tuple(assign))


def datum_to_stratification(D: DilationDatum) -> dict:
    """``H -> {x : H <= D(x)}`` for every subgroup ``H``."""
    G = D.graph
    out = {}
    for H in enumerate_subgroups(D.group, max(DEFAULT_MAX_ORDER, D.group.order)):
        out[H] = frozenset(c for c in range(G.n) if H.issubgroup(D.assign[c]))
    return out


def check_stratification(G: Graph, group: Group, strata: dict) -> list[str]:
    """List the violated stratification axioms (empty when valid)."""
    from .graph import is_subgraph

    bad = []
    subs = list(strata)
    if strata.get(group.trivial) != frozenset(range(G.n)):
        bad.append("the stratum of 0 is not the whole graph")
    for H in subs:
        if not is_subgraph(G, strata[H]):
            bad.append(f"stratum {H.label()} is not closed under root and involution")
    for H, K in itertools.combinations(subs, 2):
        S = subgroup_sum(H, K)
        if strata[H] & strata[K] != strata.get(S, frozenset()):
            bad.append(f"strata {H.label()} and {K.label()} meet outside {S.label()}")
    return bad


def datum_from_stratification(G: Graph, group: Group, strata: dict) -> DilationDatum:
    """Recover ``D(x)`` as the largest ``H`` whose stratum contains ``x``."""
    bad = check_stratification(G, group, strata)
    if bad:
        raise ValidationError("stratification", bad)
    assign = {}
    for c in range(G.n):
        H = group.trivial
        for K, cells in strata.items():
            if c in cells:
                H = subgroup_sum(H, K)
        assign[c] = H
    return validate_dilation(G, group, assign)


def dual_stratification(D: DilationDatum) -> dict:
    """``H -> `` edge-maximal subgraph on the vertices with ``D(v) <= H``.

    Edges enter when ``C(e) <= H``; legs when their root does.
    """
    G = D.graph
    out = {}
    for H in enumerate_subgroups(D.group, max(DEFAULT_MAX_ORDER, D.group.order)):
        vs = {v for v in G.vertices if D.assign[v].issubgroup(H)}
        cells = set(vs)
        for e in G.edges:
            if D.C(e).issubgroup(H):
                cells.update(e)
        cells.update(h for h in G.legs if G.root[h] in vs)
        out[H] = frozenset(cells)
    return out


def index_function(D: DilationDatum) -> dict:
    """``v -> Counter(H -> number of tangent half-edges at v with D(h) = H)``."""
    G = D.graph
    return {v: Counter(D.assign[h] for h in G.tangent(v)) for v in G.vertices}


def admissible_genus(D: DilationDatum, v: int, index=None) -> Fraction:
    G = D.graph
    if G.genus is None:
        raise DomainError("admissible genus needs a genus map")
    Dv = D.assign[v]
    n = Dv.order
    a = index[v] if index is not None else Counter(D.assign[h] for h in G.tangent(v))
    total = Fraction(n * (G.genus[v] - 1) + 1)
    for K, count in a.items():
        total += Fraction(count * (n - Dv.order // K.order), 2)
    return total


def is_admissible(D: DilationDatum) -> bool:
    for v in D.graph.vertices:
        g = admissible_genus(D, v)
        if g.denominator != 1 or g < 0:
            return False
    return True


def dilated_subgraph(D: DilationDatum) -> frozenset:
    return frozenset(c for c in range(D.graph.n) if D.assign[c].order > 1)


def dilated_valence(D: DilationDatum, v: int) -> int:
    return sum(1 for h in D.graph.tangent(v) if D.assign[h].order > 1)


def dilated_subgraph_is_semistable(D: DilationDatum) -> bool:
    """No genus-0 vertex of the dilated subgraph has dilated valence below 2."""
    G = D.graph
    return all(
        dilated_valence(D, v) >= 2
        for v in G.vertices
        if D.assign[v].order > 1 and G.genus[v] == 0
    )


def is_semistable_cycle(D: DilationDatum) -> bool:
    """Every vertex of the dilated subgraph has even dilated valence, and it is semistable."""
    G = D.graph
    for v in G.vertices:
        if D.assign[v].order > 1 and dilated_valence(D, v) % 2:
            return False
    return dilated_subgraph_is_semistable(D)


def _edge_choices(D_s, D_t, subs, cyclic_only):
    top = subgroup_intersection(D_s, D_t)
    return [K for K in subs if K.issubgroup(top) and (not cyclic_only or K.is_cyclic())]


def enumerate_dilations(
    G: Graph,
    group: Group,
    include_edge_groups: bool = False,
    cyclic_edges_only: bool = False,
    admissible_only: bool = True,
    max_order: int = DEFAULT_MAX_ORDER,
    max_data: int = DEFAULT_MAX_DATA,
):
    """Yield dilation data in a fixed order.

    Vertex groups run over every subgroup (vertices ascending, subgroups in
    lattice order).  Edge and leg groups are either expanded over every
    admissible choice or pinned to ``D(s) & D(t)`` and ``D(root)``.
    """
    subs = enumerate_subgroups(group, max_order)
    count = 0
    for vgroups in itertools.product(subs, repeat=len(G.vertices)):
        vd = dict(zip(G.vertices, vgroups))
        if include_edge_groups:
            e_opts = [_edge_choices(vd[G.source(e)], vd[G.target(e)], subs, cyclic_edges_only) for e in G.edges]
            l_opts = [_edge_choices(vd[G.root[h]], vd[G.root[h]], subs, cyclic_edges_only) for h in G.legs]
        else:
            e_opts = [[subgroup_intersection(vd[G.source(e)], vd[G.target(e)])] for e in G.edges]
            l_opts = [[vd[G.root[h]]] for h in G.legs]
            if cyclic_edges_only and not all(o[0].is_cyclic() for o in e_opts + l_opts):
                continue
        for choice in itertools.product(*e_opts, *l_opts):
            assign = [None] * G.n
            for v in G.vertices:
                assign[v] = vd[v]
            for e, K in zip(G.edges, choice):
                assign[e[0]] = assign[e[1]] = K
            for h, K in zip(G.legs, choice[len(G.edges):]):
                assign[h] = K
            D = DilationDatum(G, group, tuple(assign))
            if admissible_only and not is_admissible(D):
                continue
            count += 1
            if count > max_data:
                raise ResourceLimitError(
                    f"dilation enumeration reached {count} data, above the bound {max_data}"
                )
            yield D


def enumerate_admissible_dilations(
    G: Graph,
    group: Group,
    include_edge_groups: bool = False,
    cyclic_edges_only: bool = False,
    max_order: int = DEFAULT_MAX_ORDER,
    max_data: int = DEFAULT_MAX_DATA,
) -> list[DilationDatum]:
    if G.genus is None:
        raise DomainError("admissibility needs a genus map")
    return list(enumerate_dilations(G, group, include_edge_groups, cyclic_edges_only,
                                    True, max_order, max_data))


def load_dilation(path, G: Graph, group: Group | None = None) -> DilationDatum:
    """Read the dilation file schema.

    A half-edge listed without its partner passes its group on to the partner.
    """
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from None
    return dilation_from_dict(raw, G, group)


def dilation_from_dict(raw: dict, G: Graph, group: Group | None = None) -> DilationDatum:
    file_group = parse_group(str(raw["group"])) if "group" in raw else None
    if group is None:
        group = file_group
    elif file_group is not None and file_group != group:
        raise DomainError(f"dilation file is over {file_group}, but {group} was requested")
    if group is None:
        raise FormatError("dilation data needs a group")
    assign = {}
    for k, lit in raw.get("vertices", {}).items():
        assign[int(k)] = parse_subgroup(group, lit)
    given = {int(k): parse_subgroup(group, lit) for k, lit in raw.get("halfedges", {}).items()}
    assign.update(given)
    for h, H in given.items():
        if 0 <= h < G.n and G.involution[h] not in given:
            assign[G.involution[h]] = H
    return validate_dilation(G, group, assign)


def dilation_to_dict(D: DilationDatum) -> dict:
    G = D.graph
    return {
        "group": ",".join(map(str, D.group.invariant_factors)) or "1",
        "vertices": {str(v): D.assign[v].label() for v in G.vertices if D.assign[v].order > 1},
        "halfedges": {str(h): D.assign[h].label() for h in G.half_edges if D.assign[h].order > 1},
    }


def stratification_to_dict(strata: dict) -> dict:
    return {H.label(): sorted(cells) for H, cells in sorted(strata.items(), key=lambda kv: kv[0].sort_key())}
