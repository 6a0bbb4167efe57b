"""Character lattices, distinguished cocharacters, reflex norms, reciprocity."""

import pytest

from cmcalc import intlinalg as la
from cmcalc.battery import BATTERY_NAMES, battery_field, closure_of
from cmcalc.cmtypes import (
    CMFieldHandle,
    enumerate_cm_types,
    is_primitive,
    reflex_field,
    stabilizer,
    translate_left,
    validate_cm_type,
)
from cmcalc.errors import NoSolution, NotDefinedOverE, NotGaloisContext, NotSerrePair
from cmcalc.groups import cyclic_group, direct_product
from cmcalc.serre import (
    Cocharacter,
    check_cm_type_generation,
    check_norm_triangle,
    check_norm_weight_triangle,
    check_serre_exact_sequence,
    check_translation_compatibility,
    full_character_lattice,
    identity_cocharacter,
    mumford_tate_rank,
    norm_lattice_map,
    reciprocity_cocharacter,
    reflex_norm_map,
    serre_character_lattice,
    type_cocharacter,
    weight_cocharacter,
    weight_functional,
)

C2 = battery_field("C2")
C4 = battery_field("C4")
KLEIN = battery_field("C2xC2")
GALOIS_FIELDS = [battery_field(n) for n in ("C2", "C4", "C2xC2", "C2xC4")]


def closed_form_reflex_matrix(cm_type, e_field):
    """Independent oracle: entry (c_E, c_K) is 1 exactly when some (hence
    any) representative of c_E maps the representative of c_K into phi."""
    field = cm_type.field
    g = field.group
    members = cm_type.coset_set()
    rows = []
    for ce in range(e_field.degree):
        row = []
        for ck in range(field.degree):
            values = {
                field.coset_index(g.mul(g.inv(sigma), field.coset_rep(ck))) in members
                for sigma in e_field.cosets[ce]
            }
            assert len(values) == 1, "entry depends on the representative"
            row.append(1 if values.pop() else 0)
        rows.append(tuple(row))
    return la.freeze(rows)


class TestFullLattice:
    def test_quadratic(self):
        lat = full_character_lattice(C2)
        assert lat.ambient_rank == 2 and lat.rank == 2
        assert lat.action[1] == ((0, 1), (1, 0))

    def test_c4_generator_is_four_cycle(self):
        lat = full_character_lattice(C4)
        p = lat.action[1]
        order = 1
        q = p
        while q != la.identity_matrix(4):
            q = la.mat_mul(q, p)
            order += 1
        assert order == 4

    def test_actions_are_permutations(self):
        for field in GALOIS_FIELDS + [battery_field("D4")]:
            lat = full_character_lattice(field)
            for p in lat.action:
                for row in p:
                    assert sum(row) == 1 and all(x in (0, 1) for x in row)
                for col in la.transpose(p):
                    assert sum(col) == 1

    def test_action_is_homomorphism(self):
        for field in GALOIS_FIELDS:
            lat = full_character_lattice(field)
            g = field.group
            for a in g.elements():
                for b in g.elements():
                    assert la.mat_mul(lat.action[a], lat.action[b]) == lat.action[g.mul(a, b)]


class TestSerreLattice:
    def test_quadratic_full(self):
        lat = serre_character_lattice(C2)
        assert lat.rank == 2
        assert lat.basis == la.identity_matrix(2)

    def test_rational_rank_one(self):
        lat = serre_character_lattice(CMFieldHandle.rational())
        assert lat.rank == 1 and lat.basis == ((1,),)

    def test_c4_rank_three(self):
        assert serre_character_lattice(C4).rank == 3

    def test_rank_formula_all_galois_fields(self):
        for field in GALOIS_FIELDS:
            assert serre_character_lattice(field).rank == field.half_degree + 1
        for field in GALOIS_FIELDS + [battery_field("D4")]:
            cl = closure_of(field)
            assert serre_character_lattice(cl).rank == cl.half_degree + 1

    def test_not_galois_refused(self):
        with pytest.raises(NotGaloisContext):
            serre_character_lattice(battery_field("D4"))

    def test_constant_pair_sum_characterization(self):
        for field in GALOIS_FIELDS:
            lat = serre_character_lattice(field)
            for row in lat.basis:
                sums = {
                    row[c] + row[field.act(field.iota, c)] for c in range(field.degree)
                }
                assert len(sums) == 1


class TestCocharacters:
    def test_identity_cocharacter_values(self):
        mu = identity_cocharacter(C4)
        assert mu.functional == (1, 0, 0, 0)
        assert mu.evaluate((5, 1, 2, 3)) == 5

    def test_weight_on_norm_character(self):
        w = weight_cocharacter(C4)
        norm_chi = (1, 1, 1, 1)
        assert w.evaluate(norm_chi) == -2

    def test_weight_is_rational(self):
        for field in GALOIS_FIELDS:
            w = weight_cocharacter(field)
            for g in field.group.elements():
                assert w.same_on_lattice(w.translated(g).functional)

    def test_type_cocharacter_indicator(self):
        t = validate_cm_type(C2, {0})
        assert type_cocharacter(t).functional == (1, 0)

    def test_translation_of_type_cocharacter(self):
        for field in GALOIS_FIELDS + [battery_field("D4")]:
            for t in enumerate_cm_types(field):
                mu = type_cocharacter(t)
                for tau in field.group.elements():
                    assert (
                        mu.translated(tau).functional
                        == type_cocharacter(translate_left(tau, t)).functional
                    )

    def test_weight_of_type_cocharacter_is_minus_one_everywhere(self):
        for field in GALOIS_FIELDS + [battery_field("D4")]:
            for t in enumerate_cm_types(field):
                w = weight_functional(field, type_cocharacter(t).functional)
                assert w == (-1,) * field.degree


class TestReflexNorm:
    def test_quadratic_identity_matrix(self):
        t = validate_cm_type(C2, {0})
        m = reflex_norm_map(t, C2)
        assert m.matrix == la.identity_matrix(2)

    def test_c4_matches_closed_form(self):
        t = validate_cm_type(C4, {0, 1})
        m = reflex_norm_map(t, C4)
        assert m.matrix == closed_form_reflex_matrix(t, C4)

    def test_closed_form_oracle_battery(self):
        for field in GALOIS_FIELDS + [battery_field("D4")]:
            closure = closure_of(field)
            for t in enumerate_cm_types(field):
                assert (
                    reflex_norm_map(t, closure).matrix
                    == closed_form_reflex_matrix(t, closure)
                )

    def test_equivariance_exhaustive(self):
        for field in GALOIS_FIELDS:
            closure = closure_of(field)
            src = full_character_lattice(field)
            for t in enumerate_cm_types(field):
                m = reflex_norm_map(t, closure)
                for g in field.group.elements():
                    left = la.mat_mul(m.matrix, src.action[g])
                    right = la.mat_mul(m.target.action[g], m.matrix)
                    assert left == right

    def test_reflex_containment_required(self):
        # the quadratic subfield {0,2} does not contain the reflex of {0,1}
        t = validate_cm_type(KLEIN, {0, 1})
        wrong = CMFieldHandle(
            group=KLEIN.group, iota=3, fixer=KLEIN.group.subgroup([0, 2])
        )
        with pytest.raises(NoSolution):
            reflex_norm_map(t, wrong)

    def test_reflex_field_itself_works(self):
        t = validate_cm_type(KLEIN, {0, 1})
        e = reflex_field(t)
        m = reflex_norm_map(t, e)
        assert m.matrix == closed_form_reflex_matrix(t, e)

    def test_induced_type_composite(self):
        # reflex norm of an induced type is the restriction composite
        big = KLEIN
        small = CMFieldHandle(group=big.group, iota=3, fixer=big.group.subgroup([0, 1]))
        t_big = validate_cm_type(big, {0, 1})
        t_small = validate_cm_type(small, {0})
        closure = closure_of(big)
        m_big = reflex_norm_map(t_big, closure)
        m_small = reflex_norm_map(t_small, closure)
        proj = []
        for ck in range(big.degree):
            row_index = small.coset_index(big.coset_rep(ck))
            proj.append(tuple(1 if j == row_index else 0 for j in range(small.degree)))
        proj = la.transpose(la.freeze(proj))
        assert la.mat_mul(m_small.matrix, proj) == m_big.matrix

    def test_translation_compatibility(self):
        for field in GALOIS_FIELDS:
            assert check_translation_compatibility(field)["passed"]

    def test_norm_triangle(self):
        for field in GALOIS_FIELDS:
            report = check_norm_triangle(field)
            assert report["passed"]
        assert check_norm_triangle(KLEIN)["pairs_checked"] > 0


class TestNormMap:
    def test_equal_fields_identity(self):
        m = norm_lattice_map(C4, C4)
        assert m.matrix == la.identity_matrix(4)

    def test_klein_over_quadratic(self):
        small = CMFieldHandle(
            group=KLEIN.group, iota=3, fixer=KLEIN.group.subgroup([0, 1])
        )
        m = norm_lattice_map(KLEIN, small)
        cols = la.transpose(m.matrix)
        for col in cols:
            assert sum(col) == 2  # each subfield character has two extensions


class TestChecks:
    def test_exact_sequence_ranks(self):
        expected = {"C2": [1, 3, 2], "C4": [2, 5, 3], "C2xC2": [2, 5, 3]}
        for name, ranks in expected.items():
            rep = check_serre_exact_sequence(battery_field(name))
            assert rep["passed"] and rep["ranks"] == ranks

    def test_exact_sequence_needs_imaginary_field(self):
        with pytest.raises(NotGaloisContext):
            check_serre_exact_sequence(CMFieldHandle.rational())

    def test_norm_weight_triangle(self):
        for field in GALOIS_FIELDS:
            assert check_norm_weight_triangle(field)["passed"]

    def test_norm_weight_triangle_trivial_field(self):
        assert check_norm_weight_triangle(CMFieldHandle.rational())["passed"]

    def test_generation(self):
        for field in GALOIS_FIELDS:
            rep = check_cm_type_generation(field)
            assert rep["passed"] and rep["index"] == 1

    def test_generation_c2_explicit(self):
        rep = check_cm_type_generation(C2)
        assert rep["generated_rank"] == 2


class TestGaloisQuarticWithNontrivialFixer:
    """A cyclic order-12 context whose field has a 3-element fixing subgroup:
    the Galois-quartic path with nontrivial fixer everywhere."""

    def _field(self):
        g = cyclic_group(12)
        return CMFieldHandle(group=g, iota=6, fixer=g.subgroup([0, 4, 8]))

    def test_serre_rank_and_sequence(self):
        field = self._field()
        assert serre_character_lattice(field).rank == 3
        rep = check_serre_exact_sequence(field)
        assert rep["passed"] and rep["ranks"] == [2, 5, 3]

    def test_generation_and_norm_weight(self):
        field = self._field()
        assert check_cm_type_generation(field)["passed"]
        assert check_norm_weight_triangle(field)["passed"]

    def test_reflex_norms_against_oracle(self):
        field = self._field()
        closure = closure_of(field)
        for t in enumerate_cm_types(field):
            assert is_primitive(t)
            assert (
                reflex_norm_map(t, closure).matrix
                == closed_form_reflex_matrix(t, closure)
            )
            assert mumford_tate_rank(t) == 3

    def test_translation_and_triangle(self):
        field = self._field()
        assert check_translation_compatibility(field)["passed"]
        assert check_norm_triangle(field)["passed"]


class TestMumfordTate:
    def test_quadratic_rank_two(self):
        t = validate_cm_type(C2, {0})
        assert mumford_tate_rank(t) == 2

    def test_c4_primitive_rank_three(self):
        for t in enumerate_cm_types(C4):
            assert mumford_tate_rank(t) == 3

    def test_klein_imprimitive_rank_two(self):
        for t in enumerate_cm_types(KLEIN):
            assert mumford_tate_rank(t) == 2


class TestReciprocity:
    def test_universal_pair_is_projection(self):
        for field in GALOIS_FIELDS:
            lat = serre_character_lattice(field)
            mu = identity_cocharacter(field)
            n = reciprocity_cocharacter(lat, mu, field)
            assert n.matrix == la.identity_matrix(field.degree)

    def test_type_pair_equals_reflex_norm(self):
        for field in GALOIS_FIELDS + [battery_field("D4")]:
            closure = closure_of(field)
            for t in enumerate_cm_types(field):
                lat = full_character_lattice(field)
                n = reciprocity_cocharacter(lat, type_cocharacter(t), closure)
                assert n.matrix == reflex_norm_map(t, closure).matrix

    def test_nonrational_weight_rejected(self):
        lat = full_character_lattice(C4)
        bare = Cocharacter(lattice=lat, functional=(1, 0, 0, 0))
        with pytest.raises(NotSerrePair) as err:
            reciprocity_cocharacter(lat, bare, C4)
        assert err.value.axiom == "weight"

    def test_not_defined_over_small_field(self):
        t = validate_cm_type(KLEIN, {0, 1})
        lat = full_character_lattice(KLEIN)
        mu = type_cocharacter(t)
        wrong = CMFieldHandle(
            group=KLEIN.group, iota=3, fixer=KLEIN.group.subgroup([0, 2])
        )
        with pytest.raises(NotDefinedOverE):
            reciprocity_cocharacter(lat, mu, wrong)

    def test_noncommuting_involution_rejected(self):
        # action data whose matrix for some element fails to commute with
        # the matrix assigned to the involution
        from cmcalc.serre import CharLattice

        handle = battery_field("D4")
        d4 = handle.group
        swap01 = la.freeze([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
        swap12 = la.freeze([[1, 0, 0], [0, 0, 1], [0, 1, 0]])
        ident = la.identity_matrix(3)
        action = tuple(
            swap01 if g == handle.iota else (swap12 if g == 1 else ident)
            for g in d4.elements()
        )
        lat = CharLattice(ambient_rank=3, basis=la.identity_matrix(3), action=action)
        mu = Cocharacter(lattice=lat, functional=(1, 0, 0))
        with pytest.raises(NotSerrePair) as err:
            reciprocity_cocharacter(lat, mu, closure_of(handle))
        assert err.value.axiom == "commuting"
