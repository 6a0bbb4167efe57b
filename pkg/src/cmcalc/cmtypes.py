"""CM fields and CM-types as finite Galois data.

A CM field K is presented by a handle (G, iota, H): an ambient finite group
G, a central involution iota (complex conjugation), and the subgroup H
fixing K.  Embeddings of K correspond to left cosets G/H, and a CM-type is
a set of cosets meeting each iota-orbit exactly once.  Everything downstream
(reflex fields, reflex types, translation, induction) is coset combinatorics
inside the one ambient group.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache

from .errors import (
    CMError,
    InternalInconsistency,
    NotACMType,
    NotAnAutomorphismOfK,
    NotNested,
)
from .groups import FiniteGroup, Subgroup, coset_of, left_cosets, subgroup_generated


@dataclass(frozen=True)
class CMFieldHandle:
    """A CM field K = L^H inside a fixed Galois closure with group G.

    Invariants: iota is a central involution of G not contained in H.  The
    order-1 group with iota the identity is admitted as the degenerate
    rational context (used only for lattice-rank anchors).
    """

    group: FiniteGroup
    iota: int
    fixer: Subgroup

    def __post_init__(self):
        g = self.group
        if self.fixer.parent != g:
            raise CMError("fixing subgroup belongs to a different group")
        if g.order == 1:
            if self.iota != g.identity:
                raise CMError("trivial context must use the identity involution")
            return
        if self.iota == g.identity:
            raise CMError("iota must differ from the identity")
        if g.mul(self.iota, self.iota) != g.identity:
            raise CMError("iota must be an involution")
        if not g.is_central(self.iota):
            raise CMError("iota must be central")
        if self.iota in self.fixer:
            raise CMError("iota must move K (K is not totally real)")

    @classmethod
    def rational(cls) -> "CMFieldHandle":
        """Degenerate handle for the rational field (trivial context)."""
        from .groups import cyclic_group

        g = cyclic_group(1)
        return cls(group=g, iota=0, fixer=g.trivial_subgroup())

    @property
    def is_degenerate(self) -> bool:
        return self.group.order == 1

    @cached_property
    def cosets(self) -> tuple[tuple[int, ...], ...]:
        return left_cosets(self.group, self.fixer)

    @property
    def degree(self) -> int:
        """[K : Q] = number of embedding cosets."""
        return len(self.cosets)

    @property
    def half_degree(self) -> int:
        return self.degree // 2

    def coset_index(self, g_elt: int) -> int:
        return coset_of(self.group, self.fixer, g_elt)

    def coset_rep(self, idx: int) -> int:
        return self.cosets[idx][0]

    def act(self, g_elt: int, idx: int) -> int:
        """Left translation of an embedding coset by a group element."""
        return self.coset_index(self.group.mul(g_elt, self.coset_rep(idx)))

    @cached_property
    def identity_coset(self) -> int:
        return self.coset_index(self.group.identity)

    @cached_property
    def iota_pairs(self) -> tuple[tuple[int, int], ...]:
        """Orbits {c, iota c} on embedding cosets, ordered by first member."""
        if self.is_degenerate:
            return ()
        pairs = []
        seen = set()
        for c in range(self.degree):
            if c in seen:
                continue
            d = self.act(self.iota, c)
            if d == c:
                raise InternalInconsistency("iota fixes an embedding coset")
            pairs.append((c, d))
            seen.update((c, d))
        return tuple(pairs)

    def is_galois(self) -> bool:
        """Whether K itself is Galois over the rationals (H normal in G)."""
        return self.fixer.is_normal()


@dataclass(frozen=True)
class CMType:
    """Half-system of embedding cosets: phi together with iota*phi covers all."""

    field: CMFieldHandle
    cosets: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "cosets", tuple(sorted(self.cosets)))

    def coset_set(self) -> frozenset[int]:
        return frozenset(self.cosets)

    def complement(self) -> "CMType":
        members = self.coset_set()
        return CMType(self.field, tuple(c for c in range(self.field.degree) if c not in members))


def validate_cm_type(field: CMFieldHandle, subset) -> CMType:
    """Check the half-system condition and return the validated CMType."""
    if field.is_degenerate:
        raise NotACMType("degenerate rational context carries no CM-types")
    chosen = sorted(set(int(c) for c in subset))
    n = field.degree
    for c in chosen:
        if not 0 <= c < n:
            raise NotACMType(f"coset index {c} out of range", witness=c)
    members = set(chosen)
    for c in chosen:
        ic = field.act(field.iota, c)
        if ic in members:
            raise NotACMType(
                f"coset {c} and its conjugate {ic} both selected", witness=c
            )
    if len(chosen) != field.half_degree:
        missing = next(
            (
                c
                for c in range(n)
                if c not in members and field.act(field.iota, c) not in members
            ),
            None,
        )
        raise NotACMType(
            f"{len(chosen)} cosets selected, expected {field.half_degree}",
            witness=missing,
        )
    return CMType(field=field, cosets=tuple(chosen))


def enumerate_cm_types(field: CMFieldHandle) -> tuple[CMType, ...]:
    """All 2^g CM-types, in the deterministic binary order of iota-pair choices."""
    out = []
    for pick in itertools.product((0, 1), repeat=len(field.iota_pairs)):
        subset = tuple(pair[k] for pair, k in zip(field.iota_pairs, pick))
        out.append(validate_cm_type(field, subset))
    return tuple(out)


def translate_left(tau: int, cm_type: CMType) -> CMType:
    field = cm_type.field
    return validate_cm_type(field, (field.act(tau, c) for c in cm_type.cosets))


def translate_right(sigma: int, cm_type: CMType) -> CMType:
    """The type phi*sigma, defined when sigma normalizes the fixing subgroup."""
    field = cm_type.field
    g = field.group
    if not field.fixer.normalizes(sigma):
        raise NotAnAutomorphismOfK(
            f"element {sigma} does not normalize the fixing subgroup"
        )
    moved = (
        field.coset_index(g.mul(field.coset_rep(c), sigma)) for c in cm_type.cosets
    )
    return validate_cm_type(field, moved)


def stabilizer(cm_type: CMType) -> Subgroup:
    """{g in G : g*phi == phi}, the subgroup cutting out the reflex field."""
    field = cm_type.field
    members = cm_type.coset_set()
    elts = [
        g
        for g in field.group.elements()
        if all(field.act(g, c) in members for c in cm_type.cosets)
    ]
    return field.group.subgroup(elts)


def reflex_field(cm_type: CMType) -> CMFieldHandle:
    """Handle of the reflex field, in the same ambient context."""
    stab = stabilizer(cm_type)
    if cm_type.field.iota in stab:
        raise InternalInconsistency("iota stabilizes a CM-type")
    return CMFieldHandle(group=cm_type.field.group, iota=cm_type.field.iota, fixer=stab)


def reflex_type(cm_type: CMType) -> CMType:
    """The induced CM-type on the reflex field.

    The set {g : coset(g^-1) in phi} is a union of left cosets of the
    stabilizer; those cosets, read as embeddings of the reflex field, form
    its CM-type.
    """
    field = cm_type.field
    g = field.group
    e_field = reflex_field(cm_type)
    members = cm_type.coset_set()
    pool = [x for x in g.elements() if field.coset_index(g.inv(x)) in members]
    if len(pool) % e_field.fixer.order != 0:
        raise InternalInconsistency("inverse set is not a union of reflex cosets")
    chosen = sorted({e_field.coset_index(x) for x in pool})
    covered = sorted(x for c in chosen for x in e_field.cosets[c])
    if covered != sorted(pool):
        raise InternalInconsistency("inverse set is not a union of reflex cosets")
    return validate_cm_type(e_field, chosen)


def _check_context_match(a: CMFieldHandle, b: CMFieldHandle) -> None:
    if a.group != b.group or a.iota != b.iota:
        raise NotNested("fields live in different ambient contexts")


def induce(big_field: CMFieldHandle, small_type: CMType) -> CMType:
    """Pull a CM-type back along the coset projection of nested fields."""
    small_field = small_type.field
    _check_context_match(big_field, small_field)
    if not all(h in small_field.fixer for h in big_field.fixer.elements):
        raise NotNested("first field does not contain the second")
    members = small_type.coset_set()
    lifted = [
        c
        for c in range(big_field.degree)
        if small_field.coset_index(big_field.coset_rep(c)) in members
    ]
    return validate_cm_type(big_field, lifted)


def restricts_to(cm_type: CMType, small_field: CMFieldHandle) -> CMType | None:
    """The CM-type on a subfield inducing this one, or None if there is none."""
    big_field = cm_type.field
    _check_context_match(big_field, small_field)
    if not all(h in small_field.fixer for h in big_field.fixer.elements):
        raise NotNested("not a subfield in this context")
    projected = sorted(
        {small_field.coset_index(big_field.coset_rep(c)) for c in cm_type.cosets}
    )
    try:
        candidate = validate_cm_type(small_field, projected)
    except NotACMType:
        return None
    if induce(big_field, candidate).cosets != cm_type.cosets:
        return None
    return candidate


@lru_cache(maxsize=None)
def subgroups_containing(group: FiniteGroup, sub: Subgroup) -> tuple[Subgroup, ...]:
    """All subgroups between ``sub`` and the full group (exhaustive closure walk)."""
    found = {sub.elements: sub}
    frontier = [sub]
    while frontier:
        current = frontier.pop()
        for x in group.elements():
            if x in current:
                continue
            bigger = subgroup_generated(
                group, tuple(current.elements) + (x,)
            )
            if bigger.elements not in found:
                found[bigger.elements] = bigger
                frontier.append(bigger)
    return tuple(found[k] for k in sorted(found))


def cm_subfields(field: CMFieldHandle) -> tuple[CMFieldHandle, ...]:
    """Handles of all CM subfields of K (iota acts nontrivially), K included."""
    out = []
    for sub in subgroups_containing(field.group, field.fixer):
        if field.iota in sub:
            continue  # fixed field is totally real
        out.append(CMFieldHandle(group=field.group, iota=field.iota, fixer=sub))
    return tuple(out)


def is_primitive(cm_type: CMType) -> bool:
    """True when the type is induced from no proper CM subfield."""
    for small in cm_subfields(cm_type.field):
        if small.fixer.order == cm_type.field.fixer.order:
            continue
        if restricts_to(cm_type, small) is not None:
            return False
    return True
