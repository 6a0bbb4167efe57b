"""Character-lattice calculus for quotient tori of CM fields.

For a Galois-presented field E (fixing subgroup normal in the context G),
the character lattice of E^x is Z^Sigma on the embedding cosets Sigma with
the left-translation Galois action.  The Serre sublattice consists of the
characters sum n_rho [rho] with n_rho + n_{iota rho} constant; its rank is
g + 1 for a field of degree 2g.  This module builds those lattices, the
distinguished cocharacters (evaluation at the identity embedding, its
weight, the indicator cocharacter of a CM-type), the reflex norm as an
integer matrix, norm maps between nested fields, and the reciprocity map of
a pair (lattice, cocharacter) with rational weight.

All computations are exact; sublattices are canonicalized by row HNF so
that equality of lattices is equality of bases.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import intlinalg as la
from .cmtypes import (
    CMFieldHandle,
    CMType,
    enumerate_cm_types,
    stabilizer,
    subgroups_containing,
    translate_left,
)
from .errors import (
    InternalInconsistency,
    NoSolution,
    NotDefinedOverE,
    NotGaloisContext,
    NotNested,
    NotSerrePair,
)

Matrix = la.Matrix
Vector = la.Vector


@dataclass(frozen=True)
class CharLattice:
    """A sublattice of Z^ambient_rank stable under a group action.

    ``basis`` holds the canonical (row HNF) basis; ``action`` maps each
    group element to its ambient permutation matrix, indexed by element.
    """

    ambient_rank: int
    basis: Matrix
    action: tuple[Matrix, ...]

    def __post_init__(self):
        for g, p in enumerate(self.action):
            for row in self.basis:
                if not la.in_row_span(self.basis, la.mat_vec(p, row)):
                    raise InternalInconsistency(
                        f"sublattice not stable under element {g}"
                    )

    @property
    def rank(self) -> int:
        return len(self.basis)

    def contains(self, vec: Vector) -> bool:
        return la.in_row_span(self.basis, vec)

    def is_full(self) -> bool:
        return self.basis == la.identity_matrix(self.ambient_rank)


@dataclass(frozen=True)
class Cocharacter:
    """A functional on a character lattice, stored as an ambient row vector.

    Only the restriction to the sublattice is meaningful; two ambient
    vectors describe the same cocharacter when they agree on the basis.
    """

    lattice: CharLattice
    functional: Vector

    def evaluate(self, vec: Vector) -> int:
        return sum(x * y for x, y in zip(self.functional, vec))

    def same_on_lattice(self, other_functional: Vector) -> bool:
        return all(
            self.evaluate(row) == sum(x * y for x, y in zip(other_functional, row))
            for row in self.lattice.basis
        )

    def translated(self, g_elt: int) -> "Cocharacter":
        """Galois translate: (g mu)(chi) = mu(g^-1 chi)."""
        p = self.lattice.action[g_elt]
        return Cocharacter(lattice=self.lattice, functional=la.mat_vec(p, self.functional))


@dataclass(frozen=True)
class LatticeMap:
    """An integer matrix mapping one character lattice into another.

    The matrix acts on ambient column vectors; it must carry the source
    sublattice into the target sublattice and commute with the two actions
    on the source sublattice.
    """

    source: CharLattice
    target: CharLattice
    matrix: Matrix

    def __post_init__(self):
        for row in self.source.basis:
            if not self.target.contains(la.mat_vec(self.matrix, row)):
                raise InternalInconsistency("map does not land in the target lattice")
        for g in range(len(self.source.action)):
            left = la.mat_mul(self.matrix, self.source.action[g])
            right = la.mat_mul(self.target.action[g], self.matrix)
            for row in self.source.basis:
                if la.mat_vec(left, row) != la.mat_vec(right, row):
                    raise InternalInconsistency(f"map is not equivariant at element {g}")

    def apply(self, vec: Vector) -> Vector:
        return la.mat_vec(self.matrix, vec)

    def image_rank(self) -> int:
        pushed = tuple(la.mat_vec(self.matrix, row) for row in self.source.basis)
        return la.rank(pushed)


def _perm_matrix(field: CMFieldHandle, g_elt: int) -> Matrix:
    n = field.degree
    rows = [[0] * n for _ in range(n)]
    for c in range(n):
        rows[field.act(g_elt, c)][c] = 1
    return la.freeze(rows)


@lru_cache(maxsize=None)
def _action_matrices(field: CMFieldHandle) -> tuple[Matrix, ...]:
    return tuple(_perm_matrix(field, g) for g in field.group.elements())


@lru_cache(maxsize=None)
def _generators(group) -> tuple[int, ...]:
    from .groups import subgroup_generated

    gens: list[int] = []
    have = {group.identity}
    for x in group.elements():
        if x not in have:
            gens.append(x)
            have = set(subgroup_generated(group, gens).elements)
    return tuple(gens)


@lru_cache(maxsize=None)
def full_character_lattice(field: CMFieldHandle) -> CharLattice:
    """All of Z^Sigma with the left-translation action on embedding cosets."""
    return CharLattice(
        ambient_rank=field.degree,
        basis=la.identity_matrix(field.degree),
        action=_action_matrices(field),
    )


def _require_galois(field: CMFieldHandle) -> None:
    if not field.fixer.is_normal():
        raise NotGaloisContext(
            "field is not Galois in this context; pass a Galois subfield "
            "or the full closure"
        )


@lru_cache(maxsize=None)
def serre_character_lattice(field: CMFieldHandle) -> CharLattice:
    """Kernel sublattice of all (g - 1)(iota + 1), of rank half-degree + 1."""
    _require_galois(field)
    acts = _action_matrices(field)
    n = field.degree
    ident = la.identity_matrix(n)
    iota_plus = la.mat_add(acts[field.iota], ident)
    blocks = [
        la.mat_mul(la.mat_sub(acts[g], ident), iota_plus)
        for g in field.group.elements()
    ]
    kernel = la.integer_kernel(la.stack(*blocks))
    return CharLattice(ambient_rank=n, basis=kernel, action=acts)


def identity_cocharacter(field: CMFieldHandle) -> Cocharacter:
    """Evaluation of the coefficient at the identity embedding."""
    lattice = serre_character_lattice(field)
    vec = tuple(1 if c == field.identity_coset else 0 for c in range(field.degree))
    return Cocharacter(lattice=lattice, functional=vec)


def weight_functional(field: CMFieldHandle, mu: Vector) -> Vector:
    """The weight -(iota + 1) mu of an ambient cocharacter vector."""
    moved = la.mat_vec(_action_matrices(field)[field.iota], mu)
    return tuple(-(a + b) for a, b in zip(mu, moved))


def weight_cocharacter(field: CMFieldHandle) -> Cocharacter:
    """chi = sum n_rho [rho]  |->  -(n_1 + n_iota)."""
    lattice = serre_character_lattice(field)
    mu = identity_cocharacter(field).functional
    return Cocharacter(lattice=lattice, functional=weight_functional(field, mu))


def type_cocharacter(cm_type: CMType) -> Cocharacter:
    """Indicator functional of a CM-type on the full lattice of its field."""
    field = cm_type.field
    members = cm_type.coset_set()
    vec = tuple(1 if c in members else 0 for c in range(field.degree))
    return Cocharacter(lattice=full_character_lattice(field), functional=vec)


def _coset_containment_matrix(fine: CMFieldHandle, coarse: CMFieldHandle) -> Matrix:
    """M[c_fine][c_coarse] = 1 iff the fine coset sits inside the coarse one."""
    rows = []
    for cf in range(fine.degree):
        cc = coarse.coset_index(fine.coset_rep(cf))
        rows.append(tuple(1 if j == cc else 0 for j in range(coarse.degree)))
    return la.freeze(rows)


def norm_lattice_map(e1_field: CMFieldHandle, e2_field: CMFieldHandle) -> LatticeMap:
    """Character-lattice map of the norm between Serre tori of nested fields.

    E1 must contain E2 (fixer of E1 inside fixer of E2); a subfield character
    [rho2] maps to the sum of the characters of E1 extending it.
    """
    if e1_field.group != e2_field.group or e1_field.iota != e2_field.iota:
        raise NotNested("fields live in different ambient contexts")
    if not all(h in e2_field.fixer for h in e1_field.fixer.elements):
        raise NotNested("first field does not contain the second")
    matrix = _coset_containment_matrix(e1_field, e2_field)
    source = serre_character_lattice(e2_field)
    target = serre_character_lattice(e1_field)
    out = LatticeMap(source=source, target=target, matrix=matrix)
    # defining property: the norm intertwines the two identity cocharacters
    mu1 = identity_cocharacter(e1_field)
    mu2 = identity_cocharacter(e2_field)
    for row in source.basis:
        if mu2.evaluate(row) != mu1.evaluate(out.apply(row)):
            raise InternalInconsistency("norm map fails its defining equation")
    return out


@lru_cache(maxsize=None)
def reflex_norm_map(cm_type: CMType, e_field: CMFieldHandle) -> LatticeMap:
    """The unique equivariant map with identity-coefficient evaluations 1 on phi.

    Solves the linear system (equivariance for a generating set plus the
    evaluation row at the identity coset of E) over the integers; the result
    is then certified equivariant for the whole group.  Raises NoSolution
    when E does not contain the reflex field of the type.
    """
    field = cm_type.field
    if e_field.group != field.group or e_field.iota != field.iota:
        raise NotNested("type and field live in different ambient contexts")
    _require_galois(e_field)
    n_k = field.degree
    n_e = e_field.degree
    acts_k = _action_matrices(field)
    acts_e = _action_matrices(e_field)
    nvars = n_e * n_k

    def var(r, c):
        return r * n_k + c

    rows: list[list[int]] = []
    rhs: list[int] = []
    for g in _generators(field.group):
        pe, pk = acts_e[g], acts_k[g]
        for r in range(n_e):
            for c in range(n_k):
                row = [0] * nvars
                for k in range(n_e):
                    if pe[r][k]:
                        row[var(k, c)] += pe[r][k]
                for k in range(n_k):
                    if pk[k][c]:
                        row[var(r, k)] -= pk[k][c]
                rows.append(row)
                rhs.append(0)
    members = cm_type.coset_set()
    for c in range(n_k):
        row = [0] * nvars
        row[var(e_field.identity_coset, c)] = 1
        rows.append(row)
        rhs.append(1 if c in members else 0)
    solution = la.solve_integer(la.freeze(rows), tuple(rhs))
    if solution is None:
        raise NoSolution(
            "no equivariant lift: the field does not contain the reflex field"
        )
    matrix = la.freeze([solution[r * n_k : (r + 1) * n_k] for r in range(n_e)])
    out = LatticeMap(
        source=full_character_lattice(field),
        target=serre_character_lattice(e_field),
        matrix=matrix,
    )
    # re-check the evaluation row after the generator-level solve
    mu_e = identity_cocharacter(e_field)
    for c in range(n_k):
        col = tuple(matrix[r][c] for r in range(n_e))
        if mu_e.evaluate(col) != (1 if c in members else 0):
            raise InternalInconsistency("reflex norm evaluation row corrupted")
    return out


def mumford_tate_rank(cm_type: CMType) -> int:
    """Character rank of the image torus of the reflex norm from the closure."""
    field = cm_type.field
    closure = CMFieldHandle(
        group=field.group, iota=field.iota, fixer=field.group.trivial_subgroup()
    )
    return reflex_norm_map(cm_type, closure).image_rank()


def reciprocity_cocharacter(
    t_lattice: CharLattice, mu: Cocharacter, e_field: CMFieldHandle
) -> LatticeMap:
    """Reciprocity map of a pair: restrict mu to E, then norm down.

    The pair must satisfy both axioms: the two orderings of the involution
    act identically on the lattice, and the weight -(iota+1)mu is rational.
    The result maps the pair's lattice into the full character lattice of E,
    sending chi to sum_sigma <chi, sigma mu> [sigma] over embeddings of E.
    """
    if mu.lattice != t_lattice:
        raise NotSerrePair("cocharacter does not live on the given lattice", "input")
    group = e_field.group
    if len(t_lattice.action) != group.order:
        raise NotSerrePair("lattice action does not match the ambient group", "input")
    iota = e_field.iota
    for g in group.elements():
        gi = la.mat_mul(t_lattice.action[g], t_lattice.action[iota])
        ig = la.mat_mul(t_lattice.action[iota], t_lattice.action[g])
        for row in t_lattice.basis:
            if la.mat_vec(gi, row) != la.mat_vec(ig, row):
                raise NotSerrePair(
                    "the two involution orderings act differently", "commuting"
                )
    w = Cocharacter(
        lattice=t_lattice,
        functional=tuple(
            -(a + b) for a, b in zip(mu.functional, mu.translated(iota).functional)
        ),
    )
    for g in group.elements():
        if not w.same_on_lattice(w.translated(g).functional):
            raise NotSerrePair("weight of mu is not rational", "weight")
    _require_galois(e_field)
    for h in e_field.fixer.elements:
        if not mu.same_on_lattice(mu.translated(h).functional):
            raise NotDefinedOverE("mu is not fixed by the subgroup cutting out E")
    rows = [
        mu.translated(e_field.coset_rep(c)).functional for c in range(e_field.degree)
    ]
    return LatticeMap(
        source=t_lattice,
        target=full_character_lattice(e_field),
        matrix=la.freeze(rows),
    )


# --- verification reports ---------------------------------------------------


def check_serre_exact_sequence(field: CMFieldHandle) -> dict:
    """Exactness of 0 -> X(S) -> X(E^x) + Z -> X(E0^x) -> 0 on lattices.

    Reports the three ranks (g, 2g+1, g+1) and exactness at every node.
    Requires a totally imaginary field: the sequence degenerates when the
    involution acts trivially.
    """
    if field.is_degenerate:
        raise NotGaloisContext("sequence requires a totally imaginary field")
    _require_galois(field)
    serre = serre_character_lattice(field)
    n = field.degree
    pair_of = {}
    for i, (c, d) in enumerate(field.iota_pairs):
        pair_of[c] = i
        pair_of[d] = i
    n_real = max(pair_of.values()) + 1
    # injection: chi |-> (chi, weight(chi)) into Z^n + Z
    mu = identity_cocharacter(field).functional
    w = weight_functional(field, mu)
    a_matrix = la.freeze(
        [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)] + [w]
    )
    # surjection: [rho] |-> [rho restricted], extra generator |-> sum of all
    b_rows = []
    for i in range(n_real):
        row = [0] * (n + 1)
        for c, p in pair_of.items():
            if p == i:
                row[c] = 1
        row[n] = 1
        b_rows.append(tuple(row))
    b_matrix = la.freeze(b_rows)

    image_a = tuple(la.mat_vec(a_matrix, row) for row in serre.basis)
    kernel_b = la.integer_kernel(b_matrix)
    injective = la.rank(image_a) == serre.rank
    middle_exact = la.lattice_equal(image_a, kernel_b)
    surjective = la.image_lattice(b_matrix) == la.identity_matrix(n_real)
    ranks = (n_real, n + 1, serre.rank)
    expected = (field.half_degree, n + 1, field.half_degree + 1)
    return {
        "law": "serre_exact_sequence",
        "field_degree": n,
        "ranks": list(ranks),
        "expected_ranks": list(expected),
        "injective": injective,
        "middle_exact": middle_exact,
        "surjective": surjective,
        "passed": bool(injective and middle_exact and surjective and ranks == expected),
    }


def check_norm_weight_triangle(field: CMFieldHandle) -> dict:
    """(1 + iota) equals minus-weight composed with the full norm on X(S)."""
    _require_galois(field)
    serre = serre_character_lattice(field)
    n = field.degree
    acts = _action_matrices(field)
    one_plus_iota = la.mat_add(acts[field.iota], la.identity_matrix(n))
    mu = identity_cocharacter(field).functional
    w = weight_functional(field, mu)
    ok = True
    for row in serre.basis:
        lhs = la.mat_vec(one_plus_iota, row)
        scale = -sum(x * y for x, y in zip(w, row))
        if lhs != (scale,) * n:
            ok = False
            break
    return {"law": "norm_weight_triangle", "field_degree": n, "passed": ok}


def check_cm_type_generation(field: CMFieldHandle) -> dict:
    """Indicator vectors of all CM-types generate the Serre sublattice."""
    _require_galois(field)
    serre = serre_character_lattice(field)
    indicators = tuple(
        type_cocharacter(t).functional for t in enumerate_cm_types(field)
    )
    generated = la.hnf_basis(indicators)
    equal = generated == serre.basis
    index = (
        la.lattice_index(indicators, serre.basis)
        if la.lattice_contains(serre.basis, indicators)
        else None
    )
    return {
        "law": "cm_type_generation",
        "field_degree": field.degree,
        "generated_rank": len(generated),
        "lattice_rank": serre.rank,
        "index": index,
        "passed": bool(equal and index == 1),
    }


def _right_translation_matrix(closure: CMFieldHandle, tau: int) -> Matrix:
    """[x] |-> [x tau] on the closure's embedding cosets (trivial fixer)."""
    group = closure.group
    n = closure.degree
    rows = [[0] * n for _ in range(n)]
    for c in range(n):
        target = closure.coset_index(group.mul(closure.coset_rep(c), tau))
        rows[target][c] = 1
    return la.freeze(rows)


def check_translation_compatibility(field: CMFieldHandle) -> dict:
    """Reflex norm of a translated type is the right-translated reflex norm.

    For every type and every tau, the matrix of the translated type equals
    R_{tau^-1} times the original matrix, with R right translation on the
    closure coordinates.
    """
    group = field.group
    closure = CMFieldHandle(
        group=group, iota=field.iota, fixer=group.trivial_subgroup()
    )
    failures = []
    for cm_type in enumerate_cm_types(field):
        base = reflex_norm_map(cm_type, closure).matrix
        for tau in group.elements():
            moved = reflex_norm_map(translate_left(tau, cm_type), closure).matrix
            twisted = la.mat_mul(
                _right_translation_matrix(closure, group.inv(tau)), base
            )
            if moved != twisted:
                failures.append({"type": list(cm_type.cosets), "tau": tau})
    return {
        "law": "reflex_norm_translation",
        "field_degree": field.degree,
        "failures": failures,
        "passed": not failures,
    }


def check_norm_triangle(field: CMFieldHandle) -> dict:
    """Reflex norm through an intermediate Galois field composed with the
    norm map equals the reflex norm through the closure."""
    group = field.group
    closure = CMFieldHandle(
        group=group, iota=field.iota, fixer=group.trivial_subgroup()
    )
    checked = 0
    failures = []
    for cm_type in enumerate_cm_types(field):
        stab = stabilizer(cm_type)
        for sub in subgroups_containing(group, group.trivial_subgroup()):
            if sub.order == 1 or field.iota in sub or not sub.is_normal():
                continue
            if not all(x in stab for x in sub.elements):
                continue
            e2 = CMFieldHandle(group=group, iota=field.iota, fixer=sub)
            via_small = reflex_norm_map(cm_type, e2)
            norm = norm_lattice_map(closure, e2)
            direct = reflex_norm_map(cm_type, closure)
            composite = la.mat_mul(norm.matrix, via_small.matrix)
            checked += 1
            if composite != direct.matrix:
                failures.append(
                    {"type": list(cm_type.cosets), "through": list(sub.elements)}
                )
    return {
        "law": "reflex_norm_through_subfield",
        "pairs_checked": checked,
        "failures": failures,
        "passed": not failures,
    }


def serre_report(field: CMFieldHandle) -> dict:
    """Aggregate lattice report for one Galois-presented field."""
    serre = serre_character_lattice(field)
    checks = [check_norm_weight_triangle(field)]
    if not field.is_degenerate:
        checks.insert(0, check_serre_exact_sequence(field))
        checks.append(check_cm_type_generation(field))
        checks.append(check_translation_compatibility(field))
        checks.append(check_norm_triangle(field))
    return {
        "degree": field.degree,
        "serre_rank": serre.rank,
        "serre_basis": [list(r) for r in serre.basis],
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
    }
