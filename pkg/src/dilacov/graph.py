"""Half-edge graphs with legs, vertex genera and exact edge lengths.

A graph is a set of cells ``0..n-1`` with an idempotent root map and an
involution fixing every vertex.  Vertices are the image of the root map,
everything else is a half-edge.  A half-edge fixed by the involution is a
leg; the others pair up into edges.  An edge is written as the pair
``(h, h')`` with ``h < h'``; ``h`` is the source side.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .errors import DomainError, FormatError, ValidationError

Edge = tuple[int, int]


@dataclass(frozen=True, eq=False)
class Graph:
    n: int
    root: tuple[int, ...]
    involution: tuple[int, ...]
    genus: dict | None = None
    lengths: dict | None = None

    @cached_property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.root)))

    @cached_property
    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices)

    @cached_property
    def half_edges(self) -> tuple[int, ...]:
        vs = self.vertex_set
        return tuple(c for c in range(self.n) if c not in vs)

    @cached_property
    def legs(self) -> tuple[int, ...]:
        return tuple(h for h in self.half_edges if self.involution[h] == h)

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        return tuple((h, self.involution[h]) for h in self.half_edges if h < self.involution[h])

    def edge_of(self, h: int) -> Edge:
        i = self.involution[h]
        return (min(h, i), max(h, i))

    def source(self, e: Edge) -> int:
        return self.root[e[0]]

    def target(self, e: Edge) -> int:
        return self.root[e[1]]

    def is_loop(self, e: Edge) -> bool:
        return self.root[e[0]] == self.root[e[1]]

    @cached_property
    def _tangents(self) -> dict:
        t = {v: [] for v in self.vertices}
        for h in self.half_edges:
            t[self.root[h]].append(h)
        return t

    def tangent(self, v: int) -> list[int]:
        """Half-edges rooted at ``v`` (legs included, loops twice)."""
        return self._tangents[v]

    def valence(self, v: int) -> int:
        return len(self._tangents[v])

    def is_leg(self, h: int) -> bool:
        return self.involution[h] == h and h not in self.vertex_set

    def length(self, e: Edge):
        if self.lengths is None:
            return None
        return self.lengths.get(e)

    def with_genus(self, genus: dict) -> "Graph":
        return Graph(self.n, self.root, self.involution, dict(genus), self.lengths)

    def with_lengths(self, lengths: dict | None) -> "Graph":
        return Graph(self.n, self.root, self.involution, self.genus,
                     None if lengths is None else dict(lengths))

    def same_structure(self, other: "Graph") -> bool:
        return (self.n, self.root, self.involution, self.genus, self.lengths) == (
            other.n, other.root, other.involution, other.genus, other.lengths)

    def __eq__(self, other):
        return isinstance(other, Graph) and self.same_structure(other)

    def __hash__(self):
        return hash((self.n, self.root, self.involution))

    def summary(self) -> str:
        return f"V={len(self.vertices)} E={len(self.edges)} L={len(self.legs)}"


def validate_graph(raw) -> Graph:
    """Build a Graph from a dict (file schema) or a Graph, checking every axiom.

    Raises ValidationError listing each violation with its cell index.
    """
    if isinstance(raw, Graph):
        raw = graph_to_dict(raw)
    try:
        n = int(raw["cells"])
        root = [int(x) for x in raw["root"]]
        inv = [int(x) for x in raw["involution"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"graph description needs cells/root/involution: {exc}") from None
    bad = []
    if len(root) != n or len(inv) != n:
        raise ValidationError("graph", [f"root/involution must have length {n}"])
    for c in range(n):
        if not 0 <= root[c] < n:
            bad.append(f"cell {c}: root out of range")
        elif root[root[c]] != root[c]:
            bad.append(f"cell {c}: root map not idempotent")
        if not 0 <= inv[c] < n:
            bad.append(f"cell {c}: involution out of range")
        elif inv[inv[c]] != c:
            bad.append(f"cell {c}: involution not involutive")
    if bad:
        raise ValidationError("graph", bad)
    vs = set(root)
    for v in sorted(vs):
        if inv[v] != v:
            bad.append(f"cell {v}: involution moves a vertex")
    genus = None
    if raw.get("genus") is not None:
        genus = {}
        for k, g in raw["genus"].items():
            k = int(k)
            if k not in vs:
                bad.append(f"cell {k}: genus on a non-vertex")
            elif int(g) < 0:
                bad.append(f"cell {k}: negative genus")
            else:
                genus[k] = int(g)
        for v in vs:
            genus.setdefault(v, 0)
    lengths = None
    if raw.get("lengths") is not None:
        lengths = {}
        for k, val in raw["lengths"].items():
            e = _edge_key(k)
            a, b = e
            if not (0 <= a < n and 0 <= b < n) or a in vs or inv[a] != b or a == b:
                bad.append(f"cell {a}: length on a non-edge {k}")
                continue
            try:
                ell = Fraction(str(val))
            except (ValueError, ZeroDivisionError):
                bad.append(f"cell {a}: unparsable length {val!r}")
                continue
            if ell <= 0:
                bad.append(f"cell {a}: nonpositive length {val}")
            lengths[e] = ell
    if bad:
        raise ValidationError("graph", bad)
    return Graph(n, tuple(root), tuple(inv), genus, lengths)


def _edge_key(k) -> Edge:
    if isinstance(k, tuple):
        a, b = k
    else:
        try:
            a, b = (int(x) for x in str(k).split("-"))
        except ValueError:
            raise FormatError(f"edge key must look like 'h-h2', got {k!r}") from None
    return (min(a, b), max(a, b))


def build_graph(num_vertices: int, edges=(), legs=(), genus=None, lengths=None) -> Graph:
    """Convenience builder: vertices ``0..V-1``, then two half-edges per edge
    (in the given order, source first), then one cell per leg.

    ``edges`` is a list of vertex pairs, ``legs`` a list of vertices,
    ``genus`` a list per vertex and ``lengths`` a list per edge.
    """
    root = list(range(num_vertices))
    inv = list(range(num_vertices))
    lens = {}
    for i, (u, v) in enumerate(edges):
        h = len(root)
        root += [u, v]
        inv += [h + 1, h]
        if lengths is not None:
            lens[(h, h + 1)] = Fraction(lengths[i])
    for v in legs:
        h = len(root)
        root.append(v)
        inv.append(h)
    g = None if genus is None else {v: int(genus[v]) for v in range(num_vertices)}
    raw = {"cells": len(root), "root": root, "involution": inv, "genus": g}
    G = validate_graph(raw)
    if lengths is not None:
        G = G.with_lengths(lens)
    return G


def named_graph(name: str) -> Graph:
    """A few small bases used throughout the tests and the CLI."""
    name = name.lower()
    if name == "theta":
        return build_graph(2, [(0, 1), (0, 1)], genus=[0, 0], lengths=[1, 1])
    if name.startswith("theta") and name[5:].isdigit():
        k = int(name[5:])
        return build_graph(2, [(0, 1)] * k, genus=[0, 0], lengths=[1] * k)
    if name in ("dumbbell_leg", "dumbbell-leg", "dumbbell"):
        # a = 0 (lower loop), m = 1 (legged middle vertex), b = 2 (upper loop)
        return build_graph(3, [(0, 0), (0, 1), (1, 2), (2, 2)], legs=[1],
                           genus=[0, 0, 0], lengths=[1, 1, 1, 1])
    if name == "loop":
        return build_graph(1, [(0, 0)], genus=[0], lengths=[1])
    if name == "point":
        return build_graph(1, genus=[1])
    if name == "theta_tail":
        return build_graph(3, [(0, 1), (0, 1), (0, 1), (0, 2)], genus=[0, 0, 0], lengths=[1, 1, 1, 5])
    raise DomainError(f"unknown built-in graph {name!r}")


def euler_and_genus(G: Graph):
    """Return ``(chi_per_vertex, chi_total, genus_per_component)``."""
    if G.genus is None:
        raise DomainError("Euler characteristic needs a genus map")
    chi = {v: 2 - 2 * G.genus[v] - G.valence(v) for v in G.vertices}
    total = sum(chi.values())
    genera = []
    for comp in components(G):
        vs = [c for c in comp if c in G.vertex_set]
        es = [e for e in G.edges if e[0] in comp]
        legs = [h for h in G.legs if h in comp]
        g = len(es) - len(vs) + 1 + sum(G.genus[v] for v in vs)
        if sum(chi[v] for v in vs) != 2 - 2 * g - len(legs):
            raise AssertionError("Euler characteristic identity failed")
        genera.append(g)
    return chi, total, genera


def components(G: Graph) -> list[frozenset]:
    """Connected components as cell sets, ordered by least vertex."""
    seen = set()
    out = []
    for v0 in G.vertices:
        if v0 in seen:
            continue
        comp = {v0}
        queue = deque([v0])
        while queue:
            v = queue.popleft()
            for h in G.tangent(v):
                comp.add(h)
                w = G.root[G.involution[h]]
                comp.add(G.involution[h])
                if w not in comp:
                    comp.add(w)
                    queue.append(w)
        seen |= comp
        out.append(frozenset(comp))
    return out


def spanning_forest(G: Graph) -> tuple[list[Edge], list[Edge]]:
    """BFS spanning forest; returns ``(tree_edges, cotree_edges)``."""
    seen = set()
    tree = set()
    for v0 in G.vertices:
        if v0 in seen:
            continue
        seen.add(v0)
        queue = deque([v0])
        while queue:
            v = queue.popleft()
            for h in sorted(G.tangent(v), key=lambda h: G.edge_of(h)):
                if G.is_leg(h):
                    continue
                w = G.root[G.involution[h]]
                if w not in seen:
                    seen.add(w)
                    tree.add(G.edge_of(h))
                    queue.append(w)
    cotree = [e for e in G.edges if e not in tree]
    return sorted(tree), cotree


def is_subgraph(G: Graph, cells) -> bool:
    cells = set(cells)
    return all(G.root[c] in cells and G.involution[c] in cells for c in cells)


def edge_maximal_subgraph(G: Graph, vertices) -> frozenset:
    """All vertices given, plus every half-edge whose edge has both ends there."""
    vs = set(vertices)
    cells = set(vs)
    for h in G.half_edges:
        if G.root[h] in vs and G.root[G.involution[h]] in vs:
            cells.add(h)
    return frozenset(cells)


def genus_of_cells(G: Graph, cells) -> int:
    vs = [c for c in cells if c in G.vertex_set]
    es = {G.edge_of(h) for h in cells if h not in G.vertex_set and not G.is_leg(h)}
    return len(es) - len(vs) + 1 + sum(G.genus[v] for v in vs)


def _compact(n, alive, root, inv, genus, lengths):
    """Reindex surviving cells in ascending old order."""
    keep = [c for c in range(n) if alive[c]]
    new = {c: i for i, c in enumerate(keep)}
    G = Graph(
        len(keep),
        tuple(new[root[c]] for c in keep),
        tuple(new[inv[c]] for c in keep),
        None if genus is None else {new[v]: g for v, g in genus.items() if alive[v]},
        None if lengths is None else {
            (min(new[a], new[b]), max(new[a], new[b])): ell
            for (a, b), ell in lengths.items() if alive[a] and alive[b]
        },
    )
    return G, new


def weighted_edge_contraction(G: Graph, S, return_map: bool = False):
    """Collapse each component of the subgraph spanned by edges ``S`` to a vertex.

    The new vertex sits at the index of the component's least vertex and
    gets the component's genus.  With ``return_map`` the old-to-new cell
    map is returned too (contracted half-edges map to their new vertex).
    """
    if G.genus is None:
        raise DomainError("weighted contraction needs a genus map")
    S = [_edge_key(e) if not isinstance(e, tuple) else (min(e), max(e)) for e in S]
    edge_set = set(G.edges)
    for e in S:
        if e not in edge_set:
            raise DomainError(f"cell {e[0]}: {e} is not an edge")
    parent = {v: v for v in G.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    touched = set()
    for a, b in S:
        u, w = find(G.root[a]), find(G.root[b])
        touched |= {G.root[a], G.root[b]}
        if u != w:
            parent[max(u, w)] = min(u, w)
    blocks = {}
    for v in sorted(touched):
        blocks.setdefault(find(v), []).append(v)
    contracted_h = {h for e in S for h in e}
    rep = {}
    genus = dict(G.genus)
    for vs in blocks.values():
        v0 = min(vs)
        cells = set(vs) | {h for e in S if G.root[e[0]] in vs for h in e}
        genus[v0] = genus_of_cells(G, cells)
        for v in vs:
            rep[v] = v0
    alive = [True] * G.n
    root = list(G.root)
    for c in range(G.n):
        if c in contracted_h or (c in rep and rep[c] != c):
            alive[c] = False
        root[c] = rep.get(root[c], root[c])
    for v in rep:
        if v != rep[v]:
            del genus[v]
    lengths = None if G.lengths is None else {e: l for e, l in G.lengths.items() if e not in set(S)}
    H, new = _compact(G.n, alive, root, list(G.involution), genus, lengths)
    if not return_map:
        return H
    cmap = {}
    for c in range(G.n):
        if alive[c]:
            cmap[c] = new[c]
        elif c in contracted_h:
            cmap[c] = new[rep[G.root[c]]]
        else:
            cmap[c] = new[rep[c]]
    return H, cmap


class _WorkGraph:
    """Mutable copy used while stabilizing; records every operation."""

    def __init__(self, G: Graph):
        self.n = G.n
        self.alive = [True] * G.n
        self.root = list(G.root)
        self.inv = list(G.involution)
        self.genus = dict(G.genus)
        self.lengths = None if G.lengths is None else dict(G.lengths)
        self.vset = set(G.vertices)
        self.log = []

    def tangent(self, v):
        return [h for h in range(self.n) if self.alive[h] and h not in self.vset and self.root[h] == v]

    def is_leg(self, h):
        return self.inv[h] == h

    def _edge(self, h):
        i = self.inv[h]
        return (min(h, i), max(h, i))

    def can_prune(self, v) -> bool:
        if not self.alive[v] or self.genus[v] != 0:
            return False
        t = self.tangent(v)
        return len(t) == 1 and not self.is_leg(t[0])

    def can_smooth(self, v) -> bool:
        if not self.alive[v] or self.genus[v] != 0:
            return False
        t = self.tangent(v)
        if len(t) != 2:
            return False
        h1, h2 = t
        if self.inv[h1] == h2:
            return False
        return not (self.is_leg(h1) and self.is_leg(h2))

    def prune(self, v):
        (h,) = self.tangent(v)
        a = self.inv[h]
        if self.lengths is not None:
            self.lengths.pop(self._edge(h), None)
        for c in (v, h, a):
            self.alive[c] = False
        del self.genus[v]
        self.log.append(("prune", v))

    def smooth(self, v):
        h1, h2 = sorted(self.tangent(v))
        if self.is_leg(h1):
            h1, h2 = h2, h1
        a = self.inv[h1]
        if self.is_leg(h2):
            if self.lengths is not None:
                self.lengths.pop(self._edge(h1), None)
            self.inv[a] = a
        else:
            b = self.inv[h2]
            if self.lengths is not None:
                l1 = self.lengths.pop(self._edge(h1), None)
                l2 = self.lengths.pop(self._edge(h2), None)
                if l1 is not None and l2 is not None:
                    self.lengths[(min(a, b), max(a, b))] = l1 + l2
            self.inv[a] = b
            self.inv[b] = a
        for c in (v, h1, h2):
            self.alive[c] = False
        del self.genus[v]
        self.log.append(("smooth", v))

    def run(self, descending: bool = False):
        order = sorted(self.vset, reverse=descending)
        changed = True
        while changed:
            changed = False
            for v in order:
                if self.can_prune(v):
                    self.prune(v)
                    changed = True
            for v in order:
                if self.can_smooth(v):
                    self.smooth(v)
                    changed = True
                    break

    def finish(self):
        return _compact(self.n, self.alive, self.root, self.inv, self.genus, self.lengths)


def stabilize(G: Graph, descending: bool = False, return_log: bool = False):
    """Prune genus-0 extremal trees, then smooth genus-0 valence-2 vertices.

    ``descending`` processes vertices in the opposite order (used to test
    that the outcome does not depend on the order).
    """
    if G.genus is None:
        raise DomainError("stabilization needs a genus map")
    if len(components(G)) != 1:
        raise DomainError("stabilize expects a connected graph; stabilize each component")
    _, chi, _ = euler_and_genus(G)
    if chi >= 0:
        raise DomainError(f"stabilize needs negative Euler characteristic, got {chi}")
    W = _WorkGraph(G)
    W.run(descending)
    H, new = W.finish()
    if return_log:
        return H, W.log, new
    return H


def graph_to_dict(G: Graph) -> dict:
    d = {"cells": G.n, "root": list(G.root), "involution": list(G.involution)}
    if G.genus is not None:
        d["genus"] = {str(v): g for v, g in sorted(G.genus.items())}
    if G.lengths is not None:
        d["lengths"] = {f"{a}-{b}": str(l) for (a, b), l in sorted(G.lengths.items())}
    return d


def load_graph(path) -> Graph:
    text = str(path)
    if text.startswith("builtin:"):
        return named_graph(text.split(":", 1)[1])
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from None
    return validate_graph(raw)


def dump_graph(G: Graph) -> str:
    return json.dumps(graph_to_dict(G), sort_keys=True)


def to_dot(G: Graph, name: str = "G", edge_degrees=None, clusters=None) -> str:
    """Graphviz text.  ``clusters`` maps a cluster label to vertex lists."""
    lines = [f"graph {name} {{"]
    placed = set()
    if clusters:
        for i, (label, vs) in enumerate(clusters.items()):
            lines.append(f"  subgraph cluster_{i} {{")
            lines.append(f'    label="{label}";')
            for v in vs:
                g = "" if G.genus is None else G.genus.get(v, 0)
                lines.append(f'    v{v} [label="v{v} (g={g})"];')
                placed.add(v)
            lines.append("  }")
    for v in G.vertices:
        if v not in placed:
            g = "" if G.genus is None else G.genus.get(v, 0)
            lines.append(f'  v{v} [label="v{v} (g={g})"];')
    for e in G.edges:
        bits = []
        if G.lengths and e in G.lengths:
            bits.append(f"l={G.lengths[e]}")
        if edge_degrees and e in edge_degrees:
            bits.append(f"d={edge_degrees[e]}")
        label = f' [label="{" ".join(bits)}"]' if bits else ""
        lines.append(f"  v{G.source(e)} -- v{G.target(e)}{label};")
    for h in G.legs:
        lines.append(f'  leg{h} [shape=point]; v{G.root[h]} -- leg{h};')
    lines.append("}")
    return "\n".join(lines) + "\n"
