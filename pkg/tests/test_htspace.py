from fractions import Fraction

import pytest

from orbifold_ht.htspace import (
    HTClass,
    HTLabel,
    NotHomogeneousError,
    bigrade,
    degree_dimensions,
    dimension_table,
    full_basis,
    group_action,
    invariant_basis,
    label_bidegree,
    label_degree,
    sector_basis,
    unit_class,
)


class TestSectorBasis:
    def test_identity_sector_surface(self, kummer):
        labels = sector_basis(kummer, "e")
        assert len(labels) == 16  # 2^2 form subsets times 2^2 polyvector subsets

    def test_twisted_sector_kummer(self, kummer):
        labels = sector_basis(kummer, "t")
        assert len(labels) == 16
        for l in labels:
            assert l.forms == () and l.polys == ()
            assert label_degree(kummer, l) == 2
            assert label_bidegree(kummer, l) == (1, 1)

    def test_cube_root_sector(self, e_z3):
        labels = sector_basis(e_z3, "t")
        assert len(labels) == 3
        for l in labels:
            assert label_degree(e_z3, l) == 1
            assert label_bidegree(e_z3, l) == (Fraction(1, 3), Fraction(2, 3))

    def test_sizes_are_components_times_subsets(self, all_quotients):
        from orbifold_ht.fixedloci import sector_data
        for s in all_quotients:
            for el in s.elements:
                sd = sector_data(s, el.index)
                assert (len(sector_basis(s, el.index))
                        == sd.components.order * 4 ** sd.m)

    def test_identity_sector_hodge_numbers(self, torus_a2):
        from math import comb
        labels = sector_basis(torus_a2, "e")
        counts = {}
        for l in labels:
            key = (len(l.forms), len(l.polys))
            counts[key] = counts.get(key, 0) + 1
        for (p, q), dim in counts.items():
            assert dim == comb(2, p) * comb(2, q)


class TestBigrade:
    def test_kummer_twisted_label(self, kummer):
        ti = kummer.element("t").index
        x = HTClass.of(kummer.field, HTLabel(ti, 0, (), ()))
        assert bigrade(kummer, x) == (1, 1)
        assert bigrade(kummer, x, "parenthesized") == (2, 0)

    def test_identity_label(self, kummer):
        x = HTClass.of(kummer.field, HTLabel(0, 0, (0,), (0, 1)))
        assert bigrade(kummer, x) == (1, 2)

    def test_mixed_class_rejected(self, kummer):
        x = (HTClass.of(kummer.field, HTLabel(0, 0, (), ()))
             + HTClass.of(kummer.field, HTLabel(0, 0, (0,), ())))
        with pytest.raises(NotHomogeneousError):
            bigrade(kummer, x)


class TestGroupAction:
    def test_identity_acts_trivially(self, all_quotients):
        for s in all_quotients:
            for l in full_basis(s):
                x = HTClass.of(s.field, l)
                assert group_action(s, "e", x) == x

    def test_twisted_kummer_labels_fixed(self, kummer):
        ti = kummer.element("t").index
        for kappa in range(16):
            x = HTClass.of(kummer.field, HTLabel(ti, kappa, (), ()))
            assert group_action(kummer, "t", x) == x

    def test_untwisted_odd_label_anti_invariant(self, kummer):
        x = HTClass.of(kummer.field, HTLabel(0, 0, (0,), ()))
        assert group_action(kummer, "t", x) == x.scale(-1)

    def test_action_is_group_homomorphism(self, all_quotients):
        for s in all_quotients:
            basis = full_basis(s)
            for a in s.elements:
                for b in s.elements:
                    ab = s.mult(a.index, b.index)
                    for l in basis:
                        x = HTClass.of(s.field, l)
                        assert (group_action(s, ab, x)
                                == group_action(s, a.index,
                                                group_action(s, b.index, x)))

    def test_action_linear_on_sums(self, e_z4):
        labels = full_basis(e_z4)[:4]
        x = HTClass(e_z4.field, {labels[0]: 1, labels[1]: 2})
        y = group_action(e_z4, "t", x)
        parts = (group_action(e_z4, "t", HTClass.of(e_z4.field, labels[0]))
                 + group_action(e_z4, "t", HTClass.of(e_z4.field, labels[1])).scale(2))
        assert y == parts


class TestInvariants:
    def test_kummer_is_a_k3_diamond(self, kummer):
        assert degree_dimensions(kummer) == {0: 1, 2: 22, 4: 1}
        table = dimension_table(kummer)
        assert table[(1, 1)] == 20
        assert table[(0, 0)] == table[(2, 2)] == 1
        assert table[(2, 0)] == table[(0, 2)] == 1
        assert sum(table.values()) == 24

    def test_kummer_degree_one_vanishes(self, kummer):
        assert 1 not in degree_dimensions(kummer)
        assert 3 not in degree_dimensions(kummer)

    def test_degree_zero_is_the_unit(self, all_quotients):
        for s in all_quotients:
            assert degree_dimensions(s)[0] == 1

    def test_elliptic_involution_quotient(self, e_neg):
        assert degree_dimensions(e_neg) == {0: 1, 2: 1}

    def test_rigid_quotients(self, e_z3, e_z4):
        assert degree_dimensions(e_z3) == {0: 1}
        assert degree_dimensions(e_z4) == {0: 1}

    def test_trivial_group_gives_torus_hodge_numbers(self, torus_a2):
        from math import comb
        table = dimension_table(torus_a2)
        for p in range(3):
            for q in range(3):
                assert table.get((p, q), 0) == comb(2, p) * comb(2, q)

    def test_invariant_vectors_are_fixed(self, all_quotients):
        for s in all_quotients:
            for v in invariant_basis(s):
                for gen in s.generators:
                    assert group_action(s, gen.name, v) == v

    def test_bidegree_table_refines_degree_table(self, all_quotients):
        for s in all_quotients:
            for convention in ("new", "parenthesized"):
                table = dimension_table(s, convention)
                per_degree = {}
                for (p, q), dim in table.items():
                    per_degree[p + q] = per_degree.get(p + q, 0) + dim
                assert per_degree == degree_dimensions(s)

    def test_omega_sign_choice_preserves_kummer(self, kummer):
        from conftest import scenario_path
        from orbifold_ht.cli import load_scenario
        plus = load_scenario(scenario_path("kummer"), omega_sign=1)
        assert degree_dimensions(plus) == degree_dimensions(kummer)


class TestUnit:
    def test_unit_label(self, kummer):
        one = unit_class(kummer)
        (label, coeff), = one.terms.items()
        assert label == HTLabel(0, 0, (), ())
        assert coeff == 1
