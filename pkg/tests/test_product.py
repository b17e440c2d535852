from fractions import Fraction

import pytest

from orbifold_ht.htspace import (
    HTClass,
    HTLabel,
    full_basis,
    label_bidegree,
    sector_basis,
    unit_class,
)
from orbifold_ht.product import (
    SectorMismatchError,
    det_line_iso,
    gamma_action,
    middle_term_table,
    multiply,
    product_image_excess_index,
    pushforward_to_target,
    restrict_to_double,
    verify_ring_axioms,
)

from oracles import classical_wedge_oracle


def point_class(scenario, word, kappa):
    el = scenario.element(word)
    return HTClass.of(scenario.field, HTLabel(el.index, kappa, (), ()))


class TestPipelineArrows:
    def test_multiply_equals_arrow_composition(self, all_quotients):
        for s in all_quotients:
            labels = full_basis(s)
            for la in labels:
                for lb in labels:
                    a = HTClass.of(s.field, la)
                    b = HTClass.of(s.field, lb)
                    composed = pushforward_to_target(
                        s, gamma_action(s, det_line_iso(
                            s, restrict_to_double(s, a, b))))
                    assert multiply(s, a, b) == composed

    def test_restriction_rejects_mixed_sector_input(self, kummer):
        ti = kummer.element("t").index
        mixed = (HTClass.of(kummer.field, HTLabel(0, 0, (), ()))
                 + HTClass.of(kummer.field, HTLabel(ti, 0, (), ())))
        with pytest.raises(SectorMismatchError):
            restrict_to_double(kummer, mixed, mixed)

    def test_restriction_kummer_disjoint_points(self, kummer):
        a = point_class(kummer, "t", 1)
        b = point_class(kummer, "t", 2)
        assert restrict_to_double(kummer, a, b).is_zero()

    def test_restriction_same_point_full_excess(self, kummer):
        a = point_class(kummer, "t", 3)
        mid = restrict_to_double(kummer, a, a)
        (label, coeff), = mid.terms.items()
        assert label.excess == (0, 1)
        assert label.forms == ()
        assert coeff == 1

    def test_det_line_scalar_is_one_for_kummer(self, kummer):
        a = point_class(kummer, "t", 0)
        mid = restrict_to_double(kummer, a, a)
        rewritten = det_line_iso(kummer, mid)
        assert list(rewritten.terms.values()) == [kummer.field.one]

    def test_gamma_kills_positive_rank(self, e_z4):
        a = point_class(e_z4, "t^3", 0)
        b = point_class(e_z4, "t^2", 0)
        mid = det_line_iso(e_z4, restrict_to_double(e_z4, a, b))
        assert not mid.is_zero()
        assert gamma_action(e_z4, mid).is_zero()

    def test_gamma_identity_when_rank_zero(self, kummer):
        a = point_class(kummer, "t", 0)
        mid = det_line_iso(kummer, restrict_to_double(kummer, a, a))
        assert gamma_action(kummer, mid) == mid


class TestUnitAndSupport:
    def test_unit_is_two_sided(self, all_quotients):
        for s in all_quotients:
            one = unit_class(s)
            for l in full_basis(s):
                x = HTClass.of(s.field, l)
                assert multiply(s, one, x) == x
                assert multiply(s, x, one) == x

    def test_disjoint_twisted_supports_vanish(self, all_quotients):
        for s in all_quotients:
            for el in s.elements[1:]:
                if s.fixed_frame_indices((el.index,)):
                    continue
                basis = sector_basis(s, el.index)
                for la in basis:
                    for lb in basis:
                        if la.component != lb.component:
                            prod = multiply(s,
                                            HTClass.of(s.field, la),
                                            HTClass.of(s.field, lb))
                            assert prod.is_zero()


class TestKummerProduct:
    def test_twisted_square_generates_top_polyvectors(self, kummer):
        gen = HTClass.of(kummer.field, HTLabel(0, 0, (0, 1), (0, 1)))
        for x in range(16):
            for y in range(16):
                prod = multiply(kummer, point_class(kummer, "t", x),
                                point_class(kummer, "t", y))
                if x == y:
                    assert prod == gen
                else:
                    assert prod.is_zero()

    def test_twisted_square_bidegree(self, kummer):
        prod = multiply(kummer, point_class(kummer, "t", 7),
                        point_class(kummer, "t", 7))
        (label,) = prod.terms
        assert label_bidegree(kummer, label) == (2, 2)

    def test_twisted_times_untwisted(self, kummer):
        x = point_class(kummer, "t", 4)
        for l in sector_basis(kummer, "e"):
            y = HTClass.of(kummer.field, l)
            prod = multiply(kummer, x, y)
            if l.forms == () and l.polys == ():
                assert prod == x
            else:
                assert prod.is_zero()


class TestClassicalReduction:
    def test_wedge_oracle_elliptic_curve(self, torus_e):
        self._check_against_oracle(torus_e)

    def test_wedge_oracle_abelian_surface(self, torus_a2):
        self._check_against_oracle(torus_a2)

    @staticmethod
    def _check_against_oracle(scenario):
        labels = full_basis(scenario)
        for la in labels:
            for lb in labels:
                prod = multiply(scenario,
                                HTClass.of(scenario.field, la),
                                HTClass.of(scenario.field, lb))
                oracle = classical_wedge_oracle((la.forms, la.polys),
                                                (lb.forms, lb.polys))
                if oracle is None:
                    assert prod.is_zero()
                else:
                    forms, polys, sign = oracle
                    expected = HTClass.of(
                        scenario.field,
                        HTLabel(0, 0, forms, polys), sign)
                    assert prod == expected


class TestZ4Products:
    def test_opposite_twists_fuse_into_one_one_class(self, e_z4):
        prod = multiply(e_z4, point_class(e_z4, "t", 0),
                        point_class(e_z4, "t^3", 0))
        (label, coeff), = prod.terms.items()
        assert label.sector == 0
        assert label.forms == (0,) and label.polys == (0,)
        assert coeff in (e_z4.field.one, -e_z4.field.one)

    def test_same_twist_squares_vanish(self, e_z4):
        assert multiply(e_z4, point_class(e_z4, "t", 0),
                        point_class(e_z4, "t", 1)).is_zero()
        assert multiply(e_z4, point_class(e_z4, "t", 0),
                        point_class(e_z4, "t", 0)).is_zero()

    def test_half_twists_fuse(self, e_z4):
        prod = multiply(e_z4, point_class(e_z4, "t^2", 1),
                        point_class(e_z4, "t^2", 1))
        (label, _), = prod.terms.items()
        assert label.sector == 0
        assert label.forms == (0,) and label.polys == (0,)


class TestBidegreeAdditivity:
    def test_all_nonzero_products_add_bidegrees(self, all_quotients):
        for s in all_quotients:
            labels = full_basis(s)
            for la in labels:
                for lb in labels:
                    prod = multiply(s, HTClass.of(s.field, la),
                                    HTClass.of(s.field, lb))
                    if prod.is_zero():
                        continue
                    want = tuple(x + y for x, y in zip(
                        label_bidegree(s, la), label_bidegree(s, lb)))
                    for label in prod.terms:
                        assert label_bidegree(s, label) == want


class TestMiddleTermTable:
    def test_kummer_concentrated_at_top_wedge(self, kummer):
        table = middle_term_table(kummer, "t", "t", 2, 0, 2, 0)
        assert table == {0: 0, 1: 0, 2: 16}
        assert product_image_excess_index(kummer, "t", "t") == 2

    def test_identity_pair_concentrated_at_zero(self, kummer):
        table = middle_term_table(kummer, "t", "e", 2, 0, 0, 0)
        assert set(table) == {0}
        assert product_image_excess_index(kummer, "t", "e") == 0

    def test_cube_root_range(self, e_z3):
        table = middle_term_table(e_z3, "t", "t", 1, 0, 1, 0)
        assert table == {0: 0, 1: 3}

    def test_parenthesized_additivity_with_image_index(self, all_quotients):
        from orbifold_ht.fixedloci import pair_data
        for s in all_quotients:
            labels = full_basis(s)
            for la in labels:
                for lb in labels:
                    prod = multiply(s, HTClass.of(s.field, la),
                                    HTClass.of(s.field, lb))
                    if prod.is_zero():
                        continue
                    pd = pair_data(s, la.sector, lb.sector)
                    i = product_image_excess_index(s, la.sector, lb.sector)
                    assert 0 <= i <= pd.r
                    pa = label_bidegree(s, la, "parenthesized")
                    pb = label_bidegree(s, lb, "parenthesized")
                    for label in prod.terms:
                        got = label_bidegree(s, label, "parenthesized")
                        assert got == (pa[0] + pb[0] - i, pa[1] + pb[1] + i)


class TestRingAxioms:
    def test_full_bases_on_curve_quotients(self, e_neg, e_z3, e_z4):
        for s in (e_neg, e_z3, e_z4):
            report = verify_ring_axioms(s, "exhaustive")
            assert report.passed, [c for c in report.checks if not c.passed]

    def test_kummer_degree_two(self, kummer):
        report = verify_ring_axioms(kummer, "exhaustive-deg2")
        assert report.passed, [c for c in report.checks if not c.passed]

    def test_trivial_group_classical_ring(self, torus_a2):
        report = verify_ring_axioms(torus_a2, "exhaustive")
        assert report.passed

    def test_sampled_mode_deterministic(self, e_z3):
        r1 = verify_ring_axioms(e_z3, "sampled", seed=1, count=200)
        r2 = verify_ring_axioms(e_z3, "sampled", seed=1, count=200)
        assert r1.passed and r2.passed
        assert [c.count for c in r1.checks] == [c.count for c in r2.checks]
