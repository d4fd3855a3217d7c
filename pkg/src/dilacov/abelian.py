"""Finite abelian groups, their subgroup lattices and quotients.

A group is ``Z/d1 + ... + Z/dk`` with ``d1 | d2 | ... | dk`` and elements
are coordinate tuples.  A subgroup ``H`` is stored through its preimage
lattice ``L`` in ``Z^k`` (``diag(d) <= L <= Z^k``) in row Hermite normal
form, which makes subgroup equality a tuple comparison.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from math import prod

from .errors import DomainError, FormatError, ResourceLimitError
from .snf import hermite_rows, integer_kernel, smith_normal_form, diagonal

DEFAULT_MAX_ORDER = 64

__all__ = [
    "Group",
    "Subgroup",
    "QuotientPresentation",
    "make_group",
    "parse_group",
    "parse_subgroup",
    "enumerate_subgroups",
    "subgroup_sum",
    "subgroup_intersection",
    "quotient_presentation",
    "canonical_coset_rep",
    "smith_normal_form",
    "DEFAULT_MAX_ORDER",
]


@dataclass(frozen=True)
class Group:
    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        d = self.invariant_factors
        if any(x < 2 for x in d):
            raise DomainError(f"invariant factors must be >= 2, got {d}")
        if any(b % a for a, b in zip(d, d[1:])):
            raise DomainError(f"not a divisibility chain: {d}")

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def zero(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def reduce(self, v) -> tuple[int, ...]:
        return tuple(int(a) % d for a, d in zip(v, self.invariant_factors))

    def add(self, a, b) -> tuple[int, ...]:
        return tuple((x + y) % d for x, y, d in zip(a, b, self.invariant_factors))

    def sub(self, a, b) -> tuple[int, ...]:
        return tuple((x - y) % d for x, y, d in zip(a, b, self.invariant_factors))

    def neg(self, a) -> tuple[int, ...]:
        return tuple(-x % d for x, d in zip(a, self.invariant_factors))

    def scale(self, n: int, a) -> tuple[int, ...]:
        return tuple(n * x % d for x, d in zip(a, self.invariant_factors))

    def generators(self) -> list[tuple[int, ...]]:
        return [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]

    @cached_property
    def elements(self) -> tuple[tuple[int, ...], ...]:
        """All elements in lexicographic order."""
        return tuple(itertools.product(*(range(d) for d in self.invariant_factors)))

    def element_order(self, a) -> int:
        n = 1
        x = a
        while any(x):
            x = self.add(x, a)
            n += 1
        return n

    @cached_property
    def trivial(self) -> "Subgroup":
        return Subgroup.generated_by(self, [])

    @cached_property
    def whole(self) -> "Subgroup":
        return Subgroup.generated_by(self, self.generators())

    def format_element(self, a) -> str:
        if all(d < 10 for d in self.invariant_factors):
            return "".join(str(x) for x in a) or "0"
        return ",".join(str(x) for x in a) or "0"

    def __str__(self):
        if not self.invariant_factors:
            return "0"
        return " x ".join(f"Z/{d}" for d in self.invariant_factors)


@dataclass(frozen=True, eq=False)
class Subgroup:
    """Subgroup of ``group`` given by its preimage lattice in row HNF."""

    group: Group
    basis: tuple[tuple[int, ...], ...]
    elements: tuple[tuple[int, ...], ...] = field(repr=False)

    @classmethod
    def generated_by(cls, group: Group, gens) -> "Subgroup":
        k = group.rank
        diag = [tuple(d if i == j else 0 for j in range(k)) for i, d in enumerate(group.invariant_factors)]
        basis = hermite_rows([tuple(g) for g in gens] + diag, k)
        return cls(group, basis, _closure(group, [group.reduce(g) for g in gens]))

    @classmethod
    def from_lattice_rows(cls, group: Group, rows) -> "Subgroup":
        return cls.generated_by(group, rows)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def index(self) -> int:
        return self.group.order // self.order

    @cached_property
    def element_set(self) -> frozenset:
        return frozenset(self.elements)

    def __contains__(self, g) -> bool:
        return tuple(g) in self.element_set

    def issubgroup(self, other: "Subgroup") -> bool:
        _same_parent(self, other)
        return self.order <= other.order and self.element_set <= other.element_set

    def is_cyclic(self) -> bool:
        return any(self.group.element_order(g) == self.order for g in self.elements)

    def generators(self) -> list[tuple[int, ...]]:
        """A short generating list (reduced lattice rows)."""
        gens = []
        for row in self.basis:
            g = self.group.reduce(row)
            if any(g) and g not in gens:
                gens.append(g)
        return gens

    def sort_key(self):
        return (self.order, self.basis)

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.group == other.group and self.basis == other.basis

    def __hash__(self):
        return hash((self.group, self.basis))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def label(self) -> str:
        if self.order == 1:
            return "0"
        if self.order == self.group.order:
            return "G"
        return "<" + ";".join(self.group.format_element(g) for g in self.generators()) + ">"

    def __repr__(self):
        return f"Subgroup({self.label()} of {self.group})"


def _closure(group: Group, gens) -> tuple[tuple[int, ...], ...]:
    seen = {group.zero}
    frontier = [group.zero]
    gens = [g for g in gens if any(g)]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = group.add(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return tuple(sorted(seen))


def _same_parent(H: Subgroup, K: Subgroup):
    if H.group != K.group:
        raise DomainError(f"subgroups of different groups: {H.group} vs {K.group}")


def make_group(factors) -> Group:
    """Normalize arbitrary cyclic factors into an invariant-factor chain.

    >>> make_group([4, 6]).invariant_factors
    (2, 12)
    """
    factors = list(factors)
    for f in factors:
        if not isinstance(f, int) or f < 1:
            raise FormatError(f"group factors must be positive integers, got {f!r}")
    if not factors:
        return Group(())
    n = len(factors)
    S, _, _ = smith_normal_form([[factors[i] if i == j else 0 for j in range(n)] for i in range(n)])
    return Group(tuple(x for x in diagonal(S) if x != 1))


_Z_FORM = re.compile(r"^(?:Z/?\(?(\d+)\)?)(?:\s*[x*+]\s*Z/?\(?(\d+)\)?)*$", re.I)


def parse_group(text: str) -> Group:
    """Parse ``2,2``, ``Z2xZ2``, ``Z/6`` or ``6``; ``0`` or ``1`` is trivial."""
    s = text.strip().replace(" ", "")
    if s in ("", "0", "1", "trivial"):
        return Group(())
    if s[0] in "Zz":
        parts = re.split(r"[x*+]", s)
        nums = []
        for p in parts:
            m = re.fullmatch(r"[Zz]/?\(?(\d+)\)?", p)
            if not m:
                raise FormatError(f"cannot parse group literal {text!r}")
            nums.append(int(m.group(1)))
    else:
        try:
            nums = [int(p) for p in s.split(",")]
        except ValueError:
            raise FormatError(f"cannot parse group literal {text!r}") from None
    return make_group(nums)


def parse_element(group: Group, text: str) -> tuple[int, ...]:
    s = text.strip()
    if "," in s:
        coords = [int(x) for x in s.split(",")]
    elif group.rank and all(d < 10 for d in group.invariant_factors) and len(s) == group.rank:
        coords = [int(c) for c in s]
    elif group.rank == 1:
        coords = [int(s)]
    elif s == "0":
        coords = [0] * group.rank
    else:
        raise FormatError(f"cannot parse element {text!r} of {group}")
    if len(coords) != group.rank:
        raise FormatError(f"element {text!r} has wrong length for {group}")
    return group.reduce(coords)


def parse_subgroup(group: Group, text: str) -> Subgroup:
    """Parse ``<10;01>``, ``<>``, ``0`` or ``G``."""
    s = text.strip().replace(" ", "")
    if s in ("0", "<>", "<0>", ""):
        return group.trivial
    if s == "G":
        return group.whole
    if not (s.startswith("<") and s.endswith(">")):
        raise FormatError(f"subgroup literal must look like <g1;g2>, got {text!r}")
    gens = [parse_element(group, g) for g in s[1:-1].split(";") if g]
    return Subgroup.generated_by(group, gens)


def enumerate_subgroups(group: Group, max_order: int = DEFAULT_MAX_ORDER) -> list[Subgroup]:
    """Every subgroup once, sorted by order then by lattice basis."""
    if group.order > max_order:
        raise ResourceLimitError(
            f"group order {group.order} exceeds the subgroup enumeration bound {max_order}"
        )
    return list(_subgroups_cached(group))


_SUBGROUP_CACHE: dict[Group, tuple[Subgroup, ...]] = {}


def _subgroups_cached(group: Group) -> tuple[Subgroup, ...]:
    if group not in _SUBGROUP_CACHE:
        found = {group.trivial}
        frontier = [group.trivial]
        while frontier:
            nxt = []
            for H in frontier:
                for g in group.elements:
                    if g in H:
                        continue
                    K = Subgroup.generated_by(group, H.generators() + [g])
                    if K not in found:
                        found.add(K)
                        nxt.append(K)
            frontier = nxt
        _SUBGROUP_CACHE[group] = tuple(sorted(found, key=Subgroup.sort_key))
    return _SUBGROUP_CACHE[group]


def subgroup_sum(H: Subgroup, K: Subgroup) -> Subgroup:
    _same_parent(H, K)
    return Subgroup.generated_by(H.group, list(H.basis) + list(K.basis))


def subgroup_intersection(H: Subgroup, K: Subgroup) -> Subgroup:
    """Intersection of preimage lattices, via an integer kernel."""
    _same_parent(H, K)
    G = H.group
    k = G.rank
    if k == 0:
        return G.trivial
    B1 = [list(r) for r in H.basis]
    B2 = [list(r) for r in K.basis]
    # columns of N are the basis vectors of both lattices, second one negated
    N = [[B1[j][i] for j in range(k)] + [-B2[j][i] for j in range(k)] for i in range(k)]
    vecs = []
    for x in integer_kernel(N, 2 * k):
        coeff = x[:k]
        vecs.append([sum(coeff[j] * B1[j][i] for j in range(k)) for i in range(k)])
    return Subgroup.generated_by(G, vecs)


@dataclass(frozen=True, eq=False)
class QuotientPresentation:
    """``G/H`` as ``Z/q1 + ... + Z/qm`` with explicit projection and lift."""

    group: Group
    subgroup: Subgroup
    quotient_factors: tuple[int, ...]
    _rows: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def quotient(self) -> Group:
        return Group(self.quotient_factors)

    @property
    def order(self) -> int:
        return prod(self.quotient_factors)

    def project(self, g) -> tuple[int, ...]:
        return tuple(
            sum(a * b for a, b in zip(row, g)) % q for row, q in zip(self._rows, self.quotient_factors)
        )

    @cached_property
    def _lift_table(self) -> dict:
        table = {}
        for g in self.group.elements:
            table.setdefault(self.project(g), g)
        return table

    @cached_property
    def rep_table(self) -> dict:
        """Every reduced element mapped to the least element of its coset."""
        return {g: self._lift_table[self.project(g)] for g in self.group.elements}

    def canonical_lift(self, q) -> tuple[int, ...]:
        return self._lift_table[tuple(q)]

    def representatives(self) -> list[tuple[int, ...]]:
        """Canonical coset representatives, sorted lexicographically."""
        return sorted(self._lift_table.values())


_QUOTIENT_CACHE: dict = {}


def quotient_presentation(group: Group, H: Subgroup) -> QuotientPresentation:
    if H.group != group:
        raise DomainError("subgroup does not belong to this group")
    key = (group, H.basis)
    if key in _QUOTIENT_CACHE:
        return _QUOTIENT_CACHE[key]
    k = group.rank
    # columns of B generate the preimage lattice
    B = [[H.basis[j][i] for j in range(k)] for i in range(k)]
    S, U, _ = smith_normal_form(B, k) if k else ([], [], [])
    d = diagonal(S) if k else []
    rows, factors = [], []
    for i, s in enumerate(d):
        if s != 1:
            rows.append(tuple(U[i]))
            factors.append(s)
    Q = QuotientPresentation(group, H, tuple(factors), tuple(rows))
    _QUOTIENT_CACHE[key] = Q
    return Q


def canonical_coset_rep(Q: QuotientPresentation, g) -> tuple[int, ...]:
    """Lexicographically least element of ``g + H``."""
    G = Q.group
    g = G.reduce(g)
    return min(G.add(g, h) for h in Q.subgroup.elements)


def coset_rep(group: Group, H: Subgroup, g) -> tuple[int, ...]:
    """Lexicographically least element of ``g + H`` (fast path via lift table)."""
    table = quotient_presentation(group, H).rep_table
    try:
        return table[g]
    except (KeyError, TypeError):
        return table[group.reduce(g)]
