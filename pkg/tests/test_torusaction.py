from fractions import Fraction

import pytest

from orbifold_ht.exactfield import Matrix
from orbifold_ht.torusaction import (
    BadComplexStructureError,
    InfiniteClosureError,
    NonCommutingError,
    NonUnimodularError,
    NotComplexLinearError,
    ScenarioOptions,
    age,
    eigen_data,
    validate_scenario,
)

J2 = [[0, -1], [1, 0]]
J4 = [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]
NEG2 = [[-1, 0], [0, -1]]
NEG4 = [[-1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]]


class TestValidate:
    def test_negation_on_elliptic_curve(self):
        s = validate_scenario("e", 1, J2, [("t", NEG2)])
        assert s.order == 2
        assert [el.word for el in s.elements] == ["e", "t"]
        assert s.elements[1].order == 2

    def test_multiplication_by_i(self):
        s = validate_scenario("e4", 1, J2, [("t", J2)])
        assert s.order == 4
        assert [el.word for el in s.elements] == ["e", "t", "t^2", "t^3"]

    def test_scaled_j_rejected(self):
        with pytest.raises(BadComplexStructureError):
            validate_scenario("bad", 1, [[0, -4], [1, 0]], [("t", NEG2)])

    def test_non_scalar_j_square_rejected(self):
        with pytest.raises(BadComplexStructureError):
            validate_scenario("bad", 1, [[1, 0], [0, -1]], [])

    def test_eisenstein_complex_structure_accepted(self):
        s = validate_scenario("z3", 1, [[1, -2], [2, -1]], [("t", [[0, -1], [1, -1]])])
        assert s.d == 3
        assert s.order == 3

    def test_non_holomorphic_generator(self):
        with pytest.raises(NotComplexLinearError):
            validate_scenario("bad", 1, J2, [("t", [[0, -1], [1, -1]])])

    def test_non_unimodular_generator(self):
        with pytest.raises(NonUnimodularError):
            validate_scenario("bad", 1, J2, [("t", [[2, 0], [0, 2]])])

    def test_infinite_order_generator(self):
        shear = [[1, 0, 1, 0], [0, 1, 0, 1], [0, 0, 1, 0], [0, 0, 0, 1]]
        with pytest.raises(InfiniteClosureError):
            validate_scenario("bad", 2, J4, [("t", shear)],
                              ScenarioOptions(closure_bound=16))

    def test_non_commuting_generators(self):
        swap = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]
        jswap = [[0, 0, 0, -1], [0, 0, 1, 0], [0, -1, 0, 0], [1, 0, 0, 0]]
        other = [[-1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, 1]]
        with pytest.raises((NonCommutingError, NotComplexLinearError)):
            validate_scenario("bad", 2, jswap, [("s", swap), ("r", other)])

    def test_trivial_group(self):
        s = validate_scenario("torus", 2, J4, [])
        assert s.order == 1
        assert s.elements[0].word == "e"

    def test_product_group(self):
        g1 = [[-1, 0, 0, 0], [0, -1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
        g2 = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]]
        s = validate_scenario("z2xz2", 2, J4, [("a", g1), ("b", g2)])
        assert s.order == 4
        assert sorted(el.word for el in s.elements) == ["a", "a*b", "b", "e"]


class TestEigenData:
    def test_identity_exponents(self, torus_a2):
        ed = eigen_data(torus_a2, "e")
        assert ed.exponents == (0, 0)

    def test_negation_on_surface(self, kummer):
        ed = eigen_data(kummer, "t")
        assert ed.exponents == (Fraction(1, 2), Fraction(1, 2))

    def test_multiplication_by_i(self, e_z4):
        ed = eigen_data(e_z4, "t")
        assert ed.exponents == (Fraction(1, 4),)

    def test_eigenvectors_are_eigenvectors(self, e_z3):
        el = e_z3.element("t")
        gk = el.matrix.to_matrix(e_z3.field)
        ed = eigen_data(e_z3, "t")
        for exp, vec in zip(ed.exponents, ed.eigenvectors):
            lam = e_z3.field.zeta_fraction(exp)
            assert gk.apply(vec) == [lam * x for x in vec]

    def test_zero_exponents_count_fixed_dimension(self, all_quotients):
        for s in all_quotients:
            for el in s.elements:
                ed = eigen_data(s, el.index)
                zeros = sum(1 for a in ed.exponents if a == 0)
                assert zeros == len(s.fixed_frame_indices((el.index,)))

    def test_frame_spans_v(self, all_quotients):
        for s in all_quotients:
            frame = Matrix.from_columns(s.field, s.frame_vectors)
            assert frame.rank() == s.n


class TestAge:
    def test_age_identity(self, kummer):
        assert age(kummer, "e") == 0

    def test_age_negation_surface(self, kummer):
        # twice the age equals the codimension for symplectic actions
        assert age(kummer, "t") == 1

    def test_age_cube_root(self, e_z3):
        assert age(e_z3, "t") == Fraction(1, 3)

    def test_age_plus_inverse_age_is_codim(self, all_quotients):
        for s in all_quotients:
            for el in s.elements:
                inv = s.inverse(el.index)
                moving = s.n - len(s.fixed_frame_indices((el.index,)))
                assert age(s, el.index) + age(s, inv) == moving

    def test_inverse_exponents_reflect(self, all_quotients):
        for s in all_quotients:
            for el in s.elements:
                inv = s.inverse(el.index)
                a = sorted(s.char_exponent(j, el.index) for j in range(s.n))
                b = sorted((1 - s.char_exponent(j, inv)) % 1 for j in range(s.n))
                assert a == b

    def test_determinant_identity(self, all_quotients):
        # det(g on V) agrees with zeta raised to the total exponent sum
        for s in all_quotients:
            for el in s.elements:
                gk = el.matrix.to_matrix(s.field)
                frame = Matrix.from_columns(s.field, s.frame_vectors)
                action = frame.solve(Matrix.from_columns(
                    s.field, [gk.apply(v) for v in s.frame_vectors]))
                det = action.det()
                assert det == s.field.zeta_fraction(age(s, el.index) % 1)
