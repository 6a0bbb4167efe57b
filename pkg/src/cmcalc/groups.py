"""Finite groups by Cayley table: subgroups, cosets, abelianizations, and
the transfer homomorphism.

Groups are given extensionally (orders <= 64 everywhere in this package), so
validation is exhaustive and every downstream object is deterministic.  All
values are immutable after construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

from .errors import InternalInconsistency, NotAGroup, NotASubgroup
from .intlinalg import freeze, smith_normal_form

_FULL_CHECK_ORDER = 64
_SAMPLED_TRIPLES = 4096


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group on elements 0..order-1 with multiplication table."""

    order: int
    table: tuple[tuple[int, ...], ...]
    identity: int
    names: tuple[str, ...] | None = None

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    @cached_property
    def inverses(self) -> tuple[int, ...]:
        inv = [-1] * self.order
        for a in range(self.order):
            for b in range(self.order):
                if self.table[a][b] == self.identity and self.table[b][a] == self.identity:
                    inv[a] = b
                    break
        return tuple(inv)

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def conj(self, g: int, x: int) -> int:
        """g x g^-1."""
        return self.mul(self.mul(g, x), self.inv(g))

    def power(self, a: int, k: int) -> int:
        if k < 0:
            return self.power(self.inv(a), -k)
        out = self.identity
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            k += 1
        return k

    @cached_property
    def is_abelian(self) -> bool:
        return all(
            self.table[a][b] == self.table[b][a]
            for a in range(self.order)
            for b in range(a + 1, self.order)
        )

    def is_central(self, a: int) -> bool:
        return all(self.table[a][b] == self.table[b][a] for b in range(self.order))

    def elements(self) -> range:
        return range(self.order)

    def name_of(self, a: int) -> str:
        return self.names[a] if self.names else str(a)

    def subgroup(self, elements) -> "Subgroup":
        return Subgroup(self, tuple(sorted(set(elements))))

    def trivial_subgroup(self) -> "Subgroup":
        return self.subgroup((self.identity,))

    def full_subgroup(self) -> "Subgroup":
        return self.subgroup(range(self.order))


def make_group(table, names=None) -> FiniteGroup:
    """Validate a Cayley table and wrap it as a FiniteGroup.

    Raises NotAGroup with an offending witness on identity, inverse, or
    associativity failure.  Associativity is checked exhaustively up to
    order 64 and on a deterministic sample of triples above that.
    """
    tbl = freeze(table)
    n = len(tbl)
    if n == 0:
        raise NotAGroup("empty table")
    for i, row in enumerate(tbl):
        if len(row) != n:
            raise NotAGroup(f"row {i} has length {len(row)}, expected {n}")
        for x in row:
            if not 0 <= x < n:
                raise NotAGroup(f"entry {x} out of range in row {i}")
    identity = None
    for e in range(n):
        if all(tbl[e][b] == b and tbl[b][e] == b for b in range(n)):
            identity = e
            break
    if identity is None:
        raise NotAGroup("no two-sided identity")
    for a in range(n):
        if not any(
            tbl[a][b] == identity and tbl[b][a] == identity for b in range(n)
        ):
            raise NotAGroup(f"element {a} has no two-sided inverse", witness=(a,))
    if n <= _FULL_CHECK_ORDER:
        triples = itertools.product(range(n), repeat=3)
    else:
        state = 0x9E3779B97F4A7C15
        sampled = []
        for _ in range(_SAMPLED_TRIPLES):
            state = (state * 6364136223846793005 + 1442695040888963407) % (1 << 64)
            sampled.append(
                (state % n, (state >> 20) % n, (state >> 40) % n)
            )
        triples = sampled
    for a, b, c in triples:
        if tbl[tbl[a][b]][c] != tbl[a][tbl[b][c]]:
            raise NotAGroup("associativity fails", witness=(a, b, c))
    if names is not None:
        names = tuple(str(s) for s in names)
        if len(names) != n:
            raise NotAGroup("names length does not match order")
    return FiniteGroup(order=n, table=tbl, identity=identity, names=names)


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of a FiniteGroup, as a sorted tuple of element indices."""

    parent: FiniteGroup
    elements: tuple[int, ...]
    _members: frozenset[int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        members = frozenset(self.elements)
        object.__setattr__(self, "_members", members)
        if self.parent.identity not in members:
            raise NotASubgroup("subgroup must contain the identity")
        for a in self.elements:
            if not 0 <= a < self.parent.order:
                raise NotASubgroup(f"element {a} out of range")
            for b in self.elements:
                if self.parent.mul(a, b) not in members:
                    raise NotASubgroup(f"not closed: {a}*{b} escapes")

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, a: int) -> bool:
        return a in self._members

    def index_in_parent(self) -> int:
        return self.parent.order // self.order

    def is_normal(self) -> bool:
        g = self.parent
        return all(
            g.conj(x, h) in self._members for x in g.elements() for h in self.elements
        )

    def normalizes(self, g_elt: int) -> bool:
        g = self.parent
        return all(g.conj(g_elt, h) in self._members for h in self.elements)

    def as_group(self) -> tuple[FiniteGroup, dict[int, int], tuple[int, ...]]:
        """Reindex as a standalone group; returns (group, to_sub, to_parent)."""
        to_parent = self.elements
        to_sub = {p: i for i, p in enumerate(to_parent)}
        table = [
            [to_sub[self.parent.mul(a, b)] for b in to_parent] for a in to_parent
        ]
        return make_group(table), to_sub, to_parent


def subgroup_generated(group: FiniteGroup, generators) -> Subgroup:
    seen = {group.identity}
    frontier = [group.identity]
    gens = sorted(set(generators))
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = group.mul(x, g)
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return group.subgroup(seen)


def commutator_subgroup(h: Subgroup) -> Subgroup:
    g = h.parent
    comms = {
        g.mul(g.mul(a, b), g.inv(g.mul(b, a)))
        for a in h.elements
        for b in h.elements
    }
    closure = subgroup_generated(g, comms)
    if not all(x in h for x in closure.elements):
        raise InternalInconsistency("commutator closure escaped the subgroup")
    return closure


@lru_cache(maxsize=None)
def left_cosets(group: FiniteGroup, sub: Subgroup) -> tuple[tuple[int, ...], ...]:
    """All left cosets gH, each sorted, ordered by their minimal element."""
    if sub.parent is not group and sub.parent != group:
        raise NotASubgroup("subgroup belongs to a different group")
    seen = set()
    cosets = []
    for g in group.elements():
        if g in seen:
            continue
        coset = tuple(sorted(group.mul(g, h) for h in sub.elements))
        cosets.append(coset)
        seen.update(coset)
    return tuple(cosets)


@lru_cache(maxsize=None)
def _coset_lookup(group: FiniteGroup, sub: Subgroup) -> dict[int, int]:
    lookup = {}
    for i, coset in enumerate(left_cosets(group, sub)):
        for g in coset:
            lookup[g] = i
    return lookup


def coset_of(group: FiniteGroup, sub: Subgroup, g: int) -> int:
    return _coset_lookup(group, sub)[g]


@dataclass(frozen=True)
class AbelianQuotient:
    """H/[H,H] in invariant-factor coordinates.

    ``moduli`` lists the invariant factors > 1 (ascending divisibility);
    values are coordinate tuples, added componentwise modulo the factors.
    The zero tuple is the identity class.
    """

    source: Subgroup
    moduli: tuple[int, ...]
    _coords: dict[int, tuple[int, ...]] = field(repr=False, compare=False)

    @property
    def order(self) -> int:
        n = 1
        for d in self.moduli:
            n *= d
        return n

    @property
    def zero(self) -> tuple[int, ...]:
        return (0,) * len(self.moduli)

    def project(self, h: int) -> tuple[int, ...]:
        """Image of a parent element of H in H/[H,H]."""
        return self._coords[h]

    def add(self, u: tuple[int, ...], v: tuple[int, ...]) -> tuple[int, ...]:
        return tuple((x + y) % d for x, y, d in zip(u, v, self.moduli))

    def neg(self, u: tuple[int, ...]) -> tuple[int, ...]:
        return tuple((-x) % d for x, d in zip(u, self.moduli))


def abelianization(h: Subgroup) -> AbelianQuotient:
    """Compute H/[H,H] with canonical Smith-normal-form coordinates."""
    g = h.parent
    comm = commutator_subgroup(h)
    # cosets of [H,H] inside H, labelled by minimal element
    seen: set[int] = set()
    cosets: list[tuple[int, ...]] = []
    for x in h.elements:
        if x in seen:
            continue
        coset = tuple(sorted(g.mul(x, c) for c in comm.elements))
        cosets.append(coset)
        seen.update(coset)
    n = len(cosets)
    class_of = {x: i for i, coset in enumerate(cosets) for x in coset}
    reps = [c[0] for c in cosets]
    # present the quotient by generators e_q and relations e_a + e_b - e_{ab}
    rows = []
    for a in range(n):
        for b in range(a, n):
            ab = class_of[g.mul(reps[a], reps[b])]
            row = [0] * n
            row[a] += 1
            row[b] += 1
            row[ab] -= 1
            rows.append(tuple(row))
    d, _, v = smith_normal_form(freeze(rows))
    diag = [d[i][i] for i in range(min(len(rows), n))] + [0] * max(0, n - len(rows))
    if any(x == 0 for x in diag[:n]):
        raise InternalInconsistency("abelian quotient of a finite group is finite")
    kept = [i for i in range(n) if diag[i] > 1]
    moduli = tuple(diag[i] for i in kept)
    coords = {}
    for x in h.elements:
        q = class_of[x]
        full = tuple(v[q][i] for i in range(n))  # e_q expressed in SNF basis
        coords[x] = tuple(full[i] % diag[i] for i in kept)
    quotient = AbelianQuotient(source=h, moduli=moduli, _coords=coords)
    _check_quotient(quotient, class_of)
    return quotient


def _check_quotient(q: AbelianQuotient, class_of) -> None:
    h = q.source
    g = h.parent
    for a in h.elements:
        for b in h.elements:
            lhs = q.project(g.mul(a, b))
            rhs = q.add(q.project(a), q.project(b))
            if lhs != rhs:
                raise InternalInconsistency("projection is not a homomorphism")
    n_classes = len(set(class_of.values()))
    if q.order != n_classes:
        raise InternalInconsistency("quotient order mismatch")


def transfer_product(
    group: FiniteGroup, sub: Subgroup, g: int, reps: tuple[int, ...] | None = None
) -> int:
    """Product of transfer factors, as an element of H.

    With left-coset representatives t_i, each factor is t_j^-1 g t_i where
    t_j represents the coset of g t_i.  The product is taken in coset order;
    it is well defined in H only up to [H,H].
    """
    if sub.parent != group:
        raise NotASubgroup("subgroup belongs to a different group")
    cosets = left_cosets(group, sub)
    lookup = _coset_lookup(group, sub)
    if reps is None:
        reps = tuple(c[0] for c in cosets)
    else:
        reps = tuple(reps)
        if len(reps) != len(cosets) or any(
            lookup[t] != i for i, t in enumerate(reps)
        ):
            raise NotASubgroup("representatives do not match the coset list")
    out = group.identity
    members = set(sub.elements)
    for i, t in enumerate(reps):
        gt = group.mul(g, t)
        j = lookup[gt]
        h = group.mul(group.inv(reps[j]), gt)
        if h not in members:
            raise InternalInconsistency("transfer factor escaped the subgroup")
        out = group.mul(out, h)
    return out


def transfer(
    group: FiniteGroup,
    sub: Subgroup,
    g: int,
    quotient: AbelianQuotient | None = None,
    reps: tuple[int, ...] | None = None,
) -> tuple[int, ...]:
    """Transfer homomorphism value of g in H/[H,H] coordinates.

    Independent of the choice of coset representatives; pass a precomputed
    ``quotient`` when sweeping many elements.
    """
    if quotient is None:
        quotient = abelianization(sub)
    return quotient.project(transfer_product(group, sub, g, reps))


# --- standard constructors ------------------------------------------------


def cyclic_group(n: int) -> FiniteGroup:
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    return make_group(table)


def direct_product(g1: FiniteGroup, g2: FiniteGroup) -> FiniteGroup:
    """Product group on index pairs (a, b) -> a * |g2| + b."""
    n1, n2 = g1.order, g2.order
    table = [
        [
            g1.mul(a1, b1) * n2 + g2.mul(a2, b2)
            for b1 in range(n1)
            for b2 in range(n2)
        ]
        for a1 in range(n1)
        for a2 in range(n2)
    ]
    return make_group(table)


def dihedral_group(n: int) -> FiniteGroup:
    """Dihedral group of order 2n; index a + n*e encodes r^a s^e."""

    def mul(x, y):
        a, e = x % n, x // n
        b, f = y % n, y // n
        if e == 0:
            return (a + b) % n + n * f
        return (a - b) % n + n * ((e + f) % 2)

    table = [[mul(x, y) for y in range(2 * n)] for x in range(2 * n)]
    names = [f"r{a}" if a > 1 else ("1" if a == 0 else "r") for a in range(n)]
    names += [("s" if a == 0 else ("rs" if a == 1 else f"r{a}s")) for a in range(n)]
    return make_group(table, names=names)
