"""G-covers of graphs: construction from cochains, certification,
classification, enumeration, isomorphism search and transport along
contraction and stabilization.

The fiber over a base cell ``x`` is laid out as the sorted coset
representatives of ``G/D(x)``, base cells in ascending order.
"""

from __future__ import annotations

import itertools
import os
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .abelian import Group, Subgroup, coset_rep, quotient_presentation, subgroup_sum, enumerate_subgroups
from .cohomology import DEFAULT_MAX_CLASSES, H1Classes, enumerate_h1_classes
from .dilation import (
    DEFAULT_MAX_DATA,
    DilationDatum,
    admissible_genus,
    enumerate_dilations,
    is_admissible,
    validate_dilation,
)
from .errors import CertificationError, DomainError, ResourceLimitError
from .graph import (
    Graph,
    _WorkGraph,
    components,
    euler_and_genus,
    stabilize,
    weighted_edge_contraction,
)


@dataclass(frozen=True, eq=False)
class Cover:
    base: Graph
    total: Graph
    projection: tuple[int, ...]
    action: tuple[tuple[int, ...], ...]  # one permutation per generator of G
    degrees: tuple[int, ...]
    datum: DilationDatum

    @property
    def group(self) -> Group:
        return self.datum.group

    @cached_property
    def fibers(self) -> dict:
        out = {x: [] for x in range(self.base.n)}
        for c, x in enumerate(self.projection):
            out[x].append(c)
        return out

    @cached_property
    def element_perms(self) -> dict:
        """Permutation of total cells for every element of ``G``."""
        grp = self.group
        ident = tuple(range(self.total.n))
        perms = {}
        for g in grp.elements:
            p = ident
            for gen, k in zip(self.action, g):
                for _ in range(k):
                    p = tuple(gen[i] for i in p)
            perms[g] = p
        return perms

    def edge_degrees(self) -> dict:
        return {e: self.degrees[e[0]] for e in self.total.edges}


# construction -------------------------------------------------------------


def _check_cochain(D: DilationDatum, eta):
    grp = D.group
    for e, pair in eta.items():
        if e not in D.vertex_sum:
            raise DomainError(f"cell {e[0]}: cochain given on a non-edge {e}")
        if len(pair) != 2 or any(len(tuple(x)) != grp.rank for x in pair):
            raise DomainError(f"cell {e[0]}: cochain value must be a pair of elements of {grp}")


def build_cover(D: DilationDatum, eta=None, genus: str | dict = "auto", unramified: bool = False) -> Cover:
    """Cover with dilation datum ``D`` glued by the cochain ``eta``.

    ``eta`` maps edges to pairs ``(eta_s, eta_t)``; missing edges are 0.
    The half-edge of the lift ``(h, g)`` of the source side is rooted at
    ``g + eta_s`` and the target side at ``g - eta_t``.

    ``genus``: ``"auto"`` uses the admissible genus where it is a
    nonnegative integer and the base genus otherwise, ``"admissible"``
    insists on it, ``"pullback"`` copies the base genus, and a dict gives
    the genus per base vertex.
    """
    G = D.graph
    grp = D.group
    eta = dict(eta or {})
    _check_cochain(D, eta)
    if unramified and not is_admissible(D):
        raise DomainError("the dilation datum is not admissible, so no unramified cover exists")
    index = {}
    labels = []
    for x in range(G.n):
        for g in quotient_presentation(grp, D.assign[x]).representatives():
            index[(x, g)] = len(labels)
            labels.append((x, g))
    n = len(labels)
    root = [0] * n
    inv = [0] * n
    for i, (x, g) in enumerate(labels):
        if x in G.vertex_set:
            root[i] = i
            inv[i] = i
            continue
        r = G.root[x]
        y = G.involution[x]
        if y == x:
            target = g
        else:
            e = G.edge_of(x)
            es, et = eta.get(e, (grp.zero, grp.zero))
            target = grp.add(g, es) if x == e[0] else grp.sub(g, et)
        root[i] = index[(r, coset_rep(grp, D.assign[r], target))]
        inv[i] = index[(y, g)]
    action = []
    for a in grp.generators():
        action.append(tuple(index[(x, coset_rep(grp, D.assign[x], grp.add(g, a)))] for x, g in labels))
    degrees = tuple(D.assign[x].order for x, _ in labels)
    tgenus = None
    if G.genus is not None:
        if isinstance(genus, dict):
            per_base = {v: int(genus[v]) for v in G.vertices}
        elif genus == "pullback":
            per_base = dict(G.genus)
        else:
            per_base = {}
            for v in G.vertices:
                gp = admissible_genus(D, v)
                if gp.denominator == 1 and gp >= 0:
                    per_base[v] = int(gp)
                elif genus == "admissible" or unramified:
                    raise DomainError(f"cell {v}: admissible genus {gp} is not a nonnegative integer")
                else:
                    per_base[v] = G.genus[v]
        tgenus = {i: per_base[x] for i, (x, _) in enumerate(labels) if x in G.vertex_set}
    total = Graph(n, tuple(root), tuple(inv), tgenus)
    c = Cover(G, total, tuple(x for x, _ in labels), tuple(action), degrees, D)
    if G.lengths is not None:
        c = Cover(G, total.with_lengths(lift_metric(c, G.lengths)), c.projection, c.action, c.degrees, D)
    return c


def lift_metric(c: Cover, lengths: dict) -> dict:
    """``l'(e') = l(phi(e')) / d(e')`` as exact rationals."""
    out = {}
    for e in c.total.edges:
        base_e = c.base.edge_of(c.projection[e[0]])
        out[e] = Fraction(lengths[base_e]) / c.degrees[e[0]]
    return out


# certification ------------------------------------------------------------


def certify(c: Cover) -> Cover:
    """Check every cover axiom; raise CertificationError naming the first failure."""
    B, T, phi = c.base, c.total, c.projection
    grp = c.group
    if len(phi) != T.n or len(c.degrees) != T.n:
        raise CertificationError("projection is defined on every cell")
    for x in range(T.n):
        if phi[T.root[x]] != B.root[phi[x]]:
            raise CertificationError("projection commutes with root", f"cell {x}")
        if phi[T.involution[x]] != B.involution[phi[x]]:
            raise CertificationError("projection commutes with involution", f"cell {x}")
        if (x in T.vertex_set) != (phi[x] in B.vertex_set):
            raise CertificationError("projection sends vertices to vertices", f"cell {x}")
    if any(not c.fibers[x] for x in range(B.n)):
        raise CertificationError("projection is surjective")
    if len(c.action) != grp.rank:
        raise CertificationError("one permutation per generator of G")
    for gen, d in zip(c.action, grp.invariant_factors):
        if sorted(gen) != list(range(T.n)):
            raise CertificationError("action is by permutations")
        for x in range(T.n):
            if gen[T.root[x]] != T.root[gen[x]] or gen[T.involution[x]] != T.involution[gen[x]]:
                raise CertificationError("action is by graph automorphisms", f"cell {x}")
            if phi[gen[x]] != phi[x]:
                raise CertificationError("action commutes with projection", f"cell {x}")
    for a, b in itertools.combinations(c.action, 2):
        if any(a[b[x]] != b[a[x]] for x in range(T.n)):
            raise CertificationError("generators commute")
    for j, d in enumerate(grp.invariant_factors):
        p = tuple(range(T.n))
        for _ in range(d):
            p = tuple(c.action[j][i] for i in p)
        if p != tuple(range(T.n)):
            raise CertificationError("action factors through G", f"generator {j} has order not dividing {d}")
    perms = c.element_perms
    for g, p in perms.items():
        for x in T.half_edges:
            if T.involution[x] != x and p[x] == T.involution[x]:
                raise CertificationError("action never flips an edge", f"cell {x} under {g}")
    for x, fib in c.fibers.items():
        orbit = {perms[g][fib[0]] for g in grp.elements}
        if orbit != set(fib):
            raise CertificationError("G acts transitively on every fiber", f"base cell {x}")
        for y in fib:
            stab = [g for g in grp.elements if perms[g][y] == y]
            if set(stab) != c.datum.assign[x].element_set:
                raise CertificationError("stabilizers equal the dilation groups", f"cell {y} over {x}")
            if c.degrees[y] != c.datum.assign[x].order:
                raise CertificationError("local degree equals the order of the dilation group", f"cell {y}")
    for v2 in T.vertices:
        v = phi[v2]
        for h in B.tangent(v):
            s = sum(c.degrees[h2] for h2 in c.fibers[h] if T.root[h2] == v2)
            if s != c.degrees[v2]:
                raise CertificationError("harmonicity", f"vertex {v2} over {v}, tangent {h}")
    return c


def datum_from_action(base: Graph, total: Graph, projection, action, group: Group) -> DilationDatum:
    """Read the dilation datum off the stabilizers of the action."""
    ident = tuple(range(total.n))
    table = {}
    for g in group.elements:
        p = ident
        for gen, k in zip(action, g):
            for _ in range(k):
                p = tuple(gen[i] for i in p)
        table[g] = p
    assign = {}
    for x in range(base.n):
        fib = [y for y in range(total.n) if projection[y] == x]
        if not fib:
            raise CertificationError("projection is surjective", f"base cell {x}")
        y = fib[0]
        gens = [g for g in group.elements if table[g][y] == y]
        assign[x] = Subgroup.generated_by(group, gens)
    return validate_dilation(base, group, assign)


# classification -----------------------------------------------------------


@dataclass
class CoverClass:
    datum: DilationDatum
    class_index: int
    representative: dict


def _find_translation(c: Cover, src: int, dst: int):
    for g in c.group.elements:
        if c.element_perms[g][src] == dst:
            return g
    raise CertificationError("G acts transitively on every fiber", f"no element sends {src} to {dst}")


def class_of_cover(c: Cover, basepoints: dict | None = None, classes: H1Classes | None = None) -> CoverClass:
    """Read off ``(eta_s, -eta_t)`` after identifying each fiber with ``G/D(x)``.

    ``basepoints`` may fix the chosen base point per base vertex/edge;
    the class does not depend on that choice.
    """
    B, T = c.base, c.total
    grp = c.group
    basepoints = basepoints or {}
    bp = {}
    for v in B.vertices:
        bp[v] = basepoints.get(v, c.fibers[v][0])
    eta = {}
    for e in B.edges:
        b = basepoints.get(e, c.fibers[e[0]][0])
        if c.projection[b] != e[0]:
            raise DomainError(f"base point {b} does not lie over the source half-edge of {e}")
        gs = _find_translation(c, bp[B.source(e)], T.root[b])
        gt = _find_translation(c, bp[B.target(e)], T.root[T.involution[b]])
        eta[e] = (gs, grp.neg(gt))
    if classes is None:
        classes = H1Classes(c.datum)
    return CoverClass(c.datum, classes.class_of(eta), eta)


# connectivity -------------------------------------------------------------


@dataclass
class ConnectivityReport:
    components: int
    spans: bool
    witnesses: list  # minimal proper subgroups through which the class factors

    @property
    def connected(self) -> bool:
        return self.components == 1

    def describe(self) -> str:
        if self.spans:
            return "vertex groups span G"
        if not self.witnesses:
            return "class is not induced from a proper subgroup"
        return "induced from " + ", ".join(H.label() for H in self.witnesses)


def _induced_classes(classes: H1Classes, H: Subgroup) -> set:
    """Classes represented by cochains with values in ``H`` on co-tree edges."""
    D = classes.datum
    grp = D.group
    opts = []
    for e in classes.cotree:
        reps = sorted({coset_rep(grp, D.C(e), h) for h in H.elements})
        opts.append(reps)
    out = set()
    for combo in itertools.product(*opts):
        out.add(classes.class_of({e: (g, grp.zero) for e, g in zip(classes.cotree, combo)}))
    return out


def connectivity(c: Cover, classes: H1Classes | None = None, class_index: int | None = None) -> ConnectivityReport:
    if len(components(c.base)) != 1:
        raise DomainError("connectivity classification needs a connected base; split it first")
    n = len(components(c.total))
    D = c.datum
    grp = D.group
    S = grp.trivial
    for v in c.base.vertices:
        S = subgroup_sum(S, D.assign[v])
    spans = S.order == grp.order
    witnesses = []
    if not spans:
        if classes is None:
            classes = H1Classes(D)
        if class_index is None:
            class_index = class_of_cover(c, classes=classes).class_index
        hits = [H for H in enumerate_subgroups(grp, max(64, grp.order))
                if H.order < grp.order and S.issubgroup(H) and class_index in _induced_classes(classes, H)]
        witnesses = [H for H in hits if not any(K != H and K.issubgroup(H) for K in hits)]
    rep = ConnectivityReport(n, spans, witnesses)
    expected = 1 if not witnesses else grp.order // min(H.order for H in witnesses)
    if spans and n != 1 or (len(witnesses) == 1 and n != expected) or (not witnesses and n != 1):
        raise CertificationError("component count agrees with the induced-subgroup witness",
                                 f"{n} components, witness {rep.describe()}")
    return rep


# ramification -------------------------------------------------------------


@dataclass
class RamificationReport:
    ramification: dict
    effective: bool
    unramified: bool
    global_rh: bool
    chi_total: int
    chi_base: int
    degree: int


def verify_unramified(c: Cover) -> RamificationReport:
    """``Ram(v') = d(v') chi(phi(v')) - chi(v')`` plus the global identity."""
    if c.base.genus is None or c.total.genus is None:
        raise DomainError("ramification needs genus maps on both graphs")
    chi_b, tot_b, _ = euler_and_genus(c.base)
    chi_t, tot_t, _ = euler_and_genus(c.total)
    ram = {v: c.degrees[v] * chi_b[c.projection[v]] - chi_t[v] for v in c.total.vertices}
    deg = c.group.order
    return RamificationReport(
        ram,
        all(r >= 0 for r in ram.values()),
        all(r == 0 for r in ram.values()),
        tot_t == deg * tot_b,
        tot_t,
        tot_b,
        deg,
    )


# isomorphism --------------------------------------------------------------


@dataclass
class IsoResult:
    isomorphic: bool
    witness: dict | None
    explored: int
    reason: str = ""

    def __bool__(self):
        return self.isomorphic


def covers_isomorphic(c1: Cover, c2: Cover) -> IsoResult:
    """Backtracking search for a G-equivariant isomorphism over the base.

    Equivariance means the image of one cell per fiber fixes the whole
    fiber, so the search runs over one choice per base vertex, with edge
    and leg fibers forced or refuted as soon as their roots are placed.
    """
    if c1.base != c2.base or c1.group != c2.group:
        return IsoResult(False, None, 0, "different base or group")
    if c1.datum.key() != c2.datum.key():
        return IsoResult(False, None, 0, "different dilation data (stabilizers differ)")
    B = c1.base
    grp = c1.group
    P1, P2 = c1.element_perms, c2.element_perms
    T1, T2 = c1.total, c2.total

    def fiber_map(x, target):
        b = c1.fibers[x][0]
        m = {}
        for g in grp.elements:
            m[P1[g][b]] = P2[g][target]
        return m

    # one item per edge (source half-edge) and per leg
    items = [e[0] for e in B.edges] + list(B.legs)

    def ends(h):
        return {B.root[h], B.root[B.involution[h]]}

    def match(h, psi):
        """Extend ``psi`` over the fibers of ``h`` and its partner, or None."""
        partner = B.involution[h]
        for cand in c2.fibers[h]:
            m = fiber_map(h, cand)
            if partner != h:
                m.update({T1.involution[y1]: T2.involution[y2] for y1, y2 in list(m.items())})
            if all(T2.root[y2] == psi[T1.root[y1]] for y1, y2 in m.items()):
                return m
        return None

    vorder = list(B.vertices)
    explored = 0

    def rec(i, psi):
        nonlocal explored
        if i == len(vorder):
            full = dict(psi)
            for h in items:
                m = match(h, psi)
                if m is None:
                    return None
                full.update(m)
            return full
        v = vorder[i]
        placed = set(vorder[: i + 1])
        for cand in c2.fibers[v]:
            explored += 1
            trial = dict(psi)
            trial.update(fiber_map(v, cand))
            if all(match(h, trial) is not None for h in items if v in ends(h) and ends(h) <= placed):
                out = rec(i + 1, trial)
                if out is not None:
                    return out
        return None

    found = rec(0, {})
    if found is None or len(found) != T1.n:
        return IsoResult(False, None, explored, "search exhausted")
    _check_isomorphism(c1, c2, found)
    return IsoResult(True, found, explored)


def _check_isomorphism(c1: Cover, c2: Cover, psi: dict):
    T1, T2 = c1.total, c2.total
    if sorted(psi.values()) != list(range(T2.n)):
        raise CertificationError("isomorphism witness is a bijection")
    for x, y in psi.items():
        if psi[T1.root[x]] != T2.root[y] or psi[T1.involution[x]] != T2.involution[y]:
            raise CertificationError("isomorphism witness is a graph morphism", f"cell {x}")
        if c1.projection[x] != c2.projection[y]:
            raise CertificationError("isomorphism witness commutes with projection", f"cell {x}")
        for a1, a2 in zip(c1.action, c2.action):
            if psi[a1[x]] != a2[y]:
                raise CertificationError("isomorphism witness is equivariant", f"cell {x}")


# enumeration --------------------------------------------------------------


@dataclass
class CatalogRow:
    datum_id: int
    datum: DilationDatum
    class_index: int
    components: int
    connected: bool
    total_vertices: int
    total_edges: int
    cover: Cover | None = None

    def record(self) -> str:
        return (f"datum_id={self.datum_id} class_index={self.class_index} components={self.components} "
                f"connected={int(self.connected)} total_vertices={self.total_vertices} "
                f"total_edges={self.total_edges}")


@dataclass
class Catalog:
    group: Group
    mode: str
    data: list
    class_counts: list
    rows: list = field(default_factory=list)

    @property
    def total(self) -> int:
        return len(self.rows)

    @property
    def connected(self) -> int:
        return sum(1 for r in self.rows if r.connected)


def _covers_for_datum(args):
    D, mode, genus, max_classes, keep = args
    res = enumerate_h1_classes(D, max_classes, cross_check=True)
    classes = res.classes
    out = []
    for i in range(res.class_count):
        eta = classes.representative_of(i)
        if mode == "unramified":
            c = build_cover(D, eta, genus="admissible", unramified=True)
        else:
            c = build_cover(D, eta, genus=genus)
        certify(c)
        back = class_of_cover(c, classes=classes).class_index
        if back != i:
            raise CertificationError("class of the built cover is the class it was built from",
                                     f"built {i}, read back {back}")
        if mode == "unramified":
            rr = verify_unramified(c)
            if not (rr.unramified and rr.global_rh):
                raise CertificationError("local and global Riemann-Hurwitz", f"class {i} of {D.describe()}")
        if len(components(c.base)) == 1:
            conn = connectivity(c, classes, i)
            ncomp = conn.components
        else:
            ncomp = len(components(c.total))
        out.append((i, ncomp, len(c.total.vertices), len(c.total.edges), c if keep else None))
    return res.class_count, out


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("DILACOV_THREADS", "1")))
    except ValueError:
        return 1


def enumerate_covers(
    G: Graph,
    group: Group,
    mode: str = "unramified",
    expand_edge_groups: bool = False,
    cyclic_edges_only: bool = False,
    genus: str | dict = "pullback",
    max_order: int = 64,
    max_data: int = DEFAULT_MAX_DATA,
    max_classes: int = DEFAULT_MAX_CLASSES,
    keep_covers: bool = False,
) -> Catalog:
    """One row per (dilation datum, H^1 class).

    ``mode="unramified"`` keeps admissible data and gives covers the
    admissible genus; ``mode="all"`` keeps every datum, always expands edge
    and leg groups, and uses ``genus`` (pullback of the base genus by default).
    """
    if mode not in ("all", "unramified"):
        raise DomainError(f"mode must be 'all' or 'unramified', not {mode!r}")
    if mode == "unramified" and G.genus is None:
        raise DomainError("unramified enumeration needs a genus map")
    expand = expand_edge_groups or mode == "all"
    data = list(enumerate_dilations(G, group, expand, cyclic_edges_only,
                                    mode == "unramified", max_order, max_data))
    jobs = [(D, mode, genus, max_classes, keep_covers) for D in data]
    workers = _workers()
    if workers > 1 and len(jobs) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_covers_for_datum, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        results = [_covers_for_datum(j) for j in jobs]
    cat = Catalog(group, mode, data, [])
    for k, (D, (count, rows)) in enumerate(zip(data, results)):
        cat.class_counts.append(count)
        for i, ncomp, nv, ne, cov in rows:
            cat.rows.append(CatalogRow(k, D, i, ncomp, ncomp == 1, nv, ne, cov))
    return cat


# brute-force oracle -------------------------------------------------------


def _raw_cover(D: DilationDatum, roots: dict, shifts: dict) -> Cover:
    """Cover with fibers ``G/D(x)`` whose half-edge ``(h, 0)`` is rooted at
    ``(r(h), roots[h])`` and whose involution sends ``(h, g)`` to
    ``(iota h, g + shifts[e])`` on the source side."""
    B = D.graph
    grp = D.group
    index, labels = {}, []
    reps = [quotient_presentation(grp, D.assign[x]).rep_table for x in range(B.n)]
    for x in range(B.n):
        for g in sorted(set(reps[x].values())):
            index[(x, g)] = len(labels)
            labels.append((x, g))
    n = len(labels)
    root, inv = [0] * n, [0] * n
    for i, (x, g) in enumerate(labels):
        if x in B.vertex_set:
            root[i] = inv[i] = i
            continue
        r = B.root[x]
        root[i] = index[(r, reps[r][grp.add(g, roots[x])])]
        y = B.involution[x]
        if y == x:
            inv[i] = i
        else:
            e = B.edge_of(x)
            t = shifts[e] if x == e[0] else grp.neg(shifts[e])
            inv[i] = index[(y, reps[y][grp.add(g, t)])]
    action = [tuple(index[(x, reps[x][grp.add(g, a)])] for x, g in labels)
              for a in grp.generators()]
    total = Graph(n, tuple(root), tuple(inv))
    return Cover(B, total, tuple(x for x, _ in labels), tuple(action),
                 tuple(D.assign[x].order for x, _ in labels), D)


def brute_force_covers(D: DilationDatum, vary_shifts: bool = False):
    """Every cover built from free choices of roots (and optionally
    involution shifts), with no cohomology involved."""
    B = D.graph
    grp = D.group
    hes = list(B.half_edges)
    root_opts = [quotient_presentation(grp, D.assign[B.root[h]]).representatives() for h in hes]
    shift_opts = [quotient_presentation(grp, D.assign[e[0]]).representatives() if vary_shifts else [grp.zero]
                  for e in B.edges]
    for roots in itertools.product(*root_opts):
        for shifts in itertools.product(*shift_opts):
            yield _raw_cover(D, dict(zip(hes, roots)), dict(zip(B.edges, shifts)))


@dataclass
class OracleReport:
    datum: DilationDatum
    h1_order: int
    covers_built: int
    iso_classes: int
    bijective: bool
    ok: bool
    detail: str = ""


def oracle_check(D: DilationDatum, vary_shifts: bool = False) -> OracleReport:
    """Count isomorphism classes of brute-force covers and compare with |H^1|."""
    res = enumerate_h1_classes(D)
    classes = res.classes
    buckets = {}
    built = 0
    detail = []
    for c in brute_force_covers(D, vary_shifts):
        certify(c)
        built += 1
        k = class_of_cover(c, classes=classes).class_index
        if k not in buckets:
            buckets[k] = c
        elif not covers_isomorphic(buckets[k], c):
            detail.append(f"two covers in class {k} are not isomorphic")
    reps = sorted(buckets)
    for a, b in itertools.combinations(reps, 2):
        if covers_isomorphic(buckets[a], buckets[b]):
            detail.append(f"classes {a} and {b} hold isomorphic covers")
    bij = set(reps) == set(range(res.class_count))
    for i in range(res.class_count):
        c = build_cover(D, classes.representative_of(i), genus="pullback")
        if class_of_cover(c, classes=classes).class_index != i:
            bij = False
            detail.append(f"class {i} does not survive the round trip")
        elif i in buckets and not covers_isomorphic(c, buckets[i]):
            bij = False
            detail.append(f"built cover of class {i} differs from the brute-force one")
    n_iso = len(reps) if not detail else -1
    ok = bij and not detail and len(reps) == res.class_count
    return OracleReport(D, res.class_count, built, len(reps), bij, ok, "; ".join(detail))


# transport ----------------------------------------------------------------


def _cover_from_parts(base, total, projection, action, group, genus_check=True) -> Cover:
    D = datum_from_action(base, total, projection, action, group)
    degrees = tuple(D.assign[projection[y]].order for y in range(total.n))
    return Cover(base, total, tuple(projection), tuple(tuple(p) for p in action), degrees, D)


def contract_cover(c: Cover, S) -> Cover:
    """Contract base edges ``S`` and all their lifts; the G-action descends."""
    S = [tuple(sorted(e)) for e in S]
    B2, bmap = weighted_edge_contraction(c.base, S, return_map=True)
    S_up = [e for e in c.total.edges if c.base.edge_of(c.projection[e[0]]) in set(S)]
    T2, tmap = weighted_edge_contraction(c.total, S_up, return_map=True)
    proj = [None] * T2.n
    for y, y2 in tmap.items():
        x2 = bmap[c.projection[y]]
        if proj[y2] is not None and proj[y2] != x2:
            raise CertificationError("contracted projection is well defined", f"cell {y2}")
        proj[y2] = x2
    action = []
    for gen in c.action:
        p = [None] * T2.n
        for y, y2 in tmap.items():
            z = tmap[gen[y]]
            if p[y2] is not None and p[y2] != z:
                raise CertificationError("action descends to the contraction", f"cell {y2}")
            p[y2] = z
        action.append(tuple(p))
    out = _cover_from_parts(B2, T2, proj, action, c.group)
    if B2.lengths is not None and c.base.lengths is not None:
        out = Cover(B2, T2.with_lengths(lift_metric(out, B2.lengths)), out.projection,
                    out.action, out.degrees, out.datum)
    return certify(out)


def stabilize_cover(c: Cover) -> Cover:
    """Replay the base stabilization upstairs, one fiber at a time."""
    rr = verify_unramified(c)
    if not rr.unramified:
        raise DomainError("stabilize_cover expects an unramified cover")
    Bst, log, bnew = stabilize(c.base, return_log=True)
    W = _WorkGraph(c.total)
    for op, v in log:
        for v2 in c.fibers[v]:
            if op == "prune":
                if not W.can_prune(v2):
                    raise CertificationError("lifts of a pruned vertex are prunable", f"vertex {v2}")
                W.prune(v2)
            else:
                if not W.can_smooth(v2):
                    raise CertificationError("lifts of a smoothed vertex are smoothable", f"vertex {v2}")
                W.smooth(v2)
    Tst, tnew = W.finish()
    proj = [None] * Tst.n
    for y, y2 in tnew.items():
        proj[y2] = bnew[c.projection[y]]
    action = [tuple(tnew[gen[y]] for y in sorted(tnew, key=tnew.get)) for gen in c.action]
    out = _cover_from_parts(Bst, Tst, proj, action, c.group)
    if Bst.lengths is not None:
        out = Cover(Bst, Tst.with_lengths(lift_metric(out, Bst.lengths)), out.projection,
                    out.action, out.degrees, out.datum)
    certify(out)
    if not verify_unramified(out).unramified:
        raise CertificationError("stabilized cover is unramified")
    return out


# files --------------------------------------------------------------------


def cover_to_dict(c: Cover) -> dict:
    from .graph import graph_to_dict

    return {
        "group": ",".join(map(str, c.group.invariant_factors)) or "1",
        "base": graph_to_dict(c.base),
        "total": graph_to_dict(c.total),
        "projection": list(c.projection),
        "action": {f"gen{i}": list(p) for i, p in enumerate(c.action)},
        "degrees": list(c.degrees),
    }


def cover_from_dict(raw: dict) -> Cover:
    from .abelian import parse_group
    from .graph import validate_graph

    grp = parse_group(str(raw["group"]))
    base = validate_graph(raw["base"])
    total = validate_graph(raw["total"])
    proj = [int(x) for x in raw["projection"]]
    action = [tuple(int(x) for x in raw["action"][f"gen{i}"]) for i in range(grp.rank)]
    c = _cover_from_parts(base, total, proj, action, grp)
    if "degrees" in raw and tuple(int(d) for d in raw["degrees"]) != c.degrees:
        raise CertificationError("local degree equals the order of the dilation group",
                                 "degrees in the file disagree with the stabilizers")
    return c
