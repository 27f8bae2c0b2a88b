"""Exact polynomial arithmetic and the classical families."""

from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from exopoly.polycore import (
    JacobiConstants,
    Poly,
    X,
    as_rational,
    classical_ode_residual,
    jacobi_classical,
    laguerre_classical,
    rational_nullspace,
    rational_str,
)

from oracles import jacobi_by_ode_system, laguerre_by_ode_system


rationals = st.fractions(
    min_value=-10, max_value=10, max_denominator=12
)
small_polys = st.lists(rationals, min_size=0, max_size=6).map(Poly)


class TestPolyArithmetic:
    def test_derivative_power_rule(self):
        k = F(3)
        p = Poly((-k * (k + 2), 0, 1))  # x^2 - k(k+2)
        assert p.derivative() == Poly((0, 2))

    def test_difference_of_squares(self):
        k = F(5, 2)
        assert Poly((k, 1)) * Poly((-k, 1)) == Poly((-k * k, 0, 1))

    def test_derivative_of_constant_is_zero(self):
        assert Poly((7,)).derivative().is_zero

    def test_compose_linear(self):
        p = Poly((1, 2, 1))  # (x+1)^2
        assert p.compose_linear(2, -1) == Poly((0, 0, 4))  # (2x-1+1)^2

    def test_exact_evaluation_and_float_evaluation(self):
        p = Poly((F(1, 3), 0, 1))
        assert p(F(1, 2)) == F(7, 12)
        assert p(0.5) == pytest.approx(7 / 12)

    @given(small_polys, small_polys)
    @settings(deadline=None)
    def test_addition_roundtrip(self, p, q):
        assert (p + q) - q == p

    @given(small_polys, small_polys)
    @settings(max_examples=60, deadline=None)
    def test_exact_division_of_products(self, p, q):
        if q.is_zero:
            return
        quo, rem = (p * q).divmod(q)
        assert rem.is_zero
        assert quo == p

    def test_decimal_literals_read_exactly(self):
        assert as_rational(2.5) == F(5, 2)
        assert as_rational(0.1) == F(1, 10)
        assert as_rational("7/2") == F(7, 2)
        with pytest.raises(TypeError):
            as_rational(True)

    def test_serialization_roundtrip(self):
        p = Poly(("-3/2", 0, "5/7"))
        assert p.to_json() == ["-3/2", "0/1", "5/7"]
        assert Poly.from_json(p.to_json()) == p
        assert rational_str(as_rational("-3/2")) == "-3/2"


class TestClassicalFamilies:
    def test_degree_zero_members(self):
        assert laguerre_classical(0, F(5, 2)) == Poly.one()
        assert jacobi_classical(0, 1, 2) == Poly.one()

    def test_laguerre_first_members_match_ode_oracle(self):
        # oracle values frozen from the equation's coefficient recursion
        assert laguerre_classical(1, 2) == Poly((3, -1))
        assert laguerre_classical(2, 0) == Poly((1, -2, F(1, 2)))
        for n in (1, 2, 5):
            for m in (F(0), F(1), F(5, 2)):
                assert laguerre_classical(n, m) == Poly(laguerre_by_ode_system(n, m))

    def test_jacobi_first_members_match_ode_oracle(self):
        assert jacobi_classical(1, 1, 1) == Poly((0, 2))
        for alpha, beta in ((F(1), F(2)), (F(2), F(5)), (F(1, 2), F(3, 2))):
            expected = Poly((F(alpha - beta, 2), F(alpha + beta + 2, 2)))
            assert jacobi_classical(1, alpha, beta) == expected
        for n in (2, 3, 6):
            for alpha, beta in ((F(1), F(2)), (F(1, 2), F(3, 2))):
                assert jacobi_classical(n, alpha, beta) == Poly(
                    jacobi_by_ode_system(n, alpha, beta)
                )

    def test_against_sympy(self):
        x = sympy.Symbol("x")
        for n in range(7):
            ours = laguerre_classical(n, F(5, 2)).coeffs
            theirs = sympy.Poly(
                sympy.laguerre_poly(n, x, sympy.Rational(5, 2)), x
            ).all_coeffs()[::-1]
            assert [sympy.Rational(c.numerator, c.denominator) for c in ours] == list(theirs)
            ours = jacobi_classical(n, F(2), F(5)).coeffs
            theirs = sympy.Poly(sympy.jacobi_poly(n, 2, 5, x), x).all_coeffs()[::-1]
            assert [sympy.Rational(c.numerator, c.denominator) for c in ours] == list(theirs)

    def test_laguerre_leading_coefficient(self):
        import math

        for n in (1, 3, 7):
            lead = laguerre_classical(n, F(5, 2)).leading
            assert lead == F((-1) ** n, math.factorial(n))


class TestOdeResidual:
    def test_laguerre_eigenpolynomial_gives_zero(self):
        m = F(5, 2)
        assert classical_ode_residual(laguerre_classical(2, m), "laguerre", m, 2).is_zero

    def test_constant_is_the_n0_eigenfunction(self):
        assert classical_ode_residual(Poly.one(), "laguerre", F(3), 0).is_zero

    def test_x_is_not_an_eigenpolynomial(self):
        m = F(7, 3)
        res = classical_ode_residual(X, "laguerre", m, 1)
        assert res == Poly((m + 1,))

    @pytest.mark.parametrize("m", [F(0), F(1), F(5, 2)])
    def test_laguerre_family_up_to_12(self, m):
        for n in range(13):
            res = classical_ode_residual(laguerre_classical(n, m), "laguerre", m, n)
            assert res.is_zero, (m, n)

    @pytest.mark.parametrize("ab", [(F(1), F(2)), (F(2), F(5)), (F(1, 2), F(3, 2))])
    def test_jacobi_family_up_to_12(self, ab):
        alpha, beta = ab
        for n in range(13):
            eig = n * (n + alpha + beta + 1)
            res = classical_ode_residual(
                jacobi_classical(n, alpha, beta), "jacobi", (alpha, beta), eig
            )
            assert res.is_zero, (alpha, beta, n)


class TestJacobiConstants:
    def test_example_values(self):
        jc = JacobiConstants.from_parameters(1, 3)
        assert (jc.a, jc.b, jc.c) == (F(1), F(2), F(3))

    def test_b_exceeds_one_for_positive_parameters(self):
        for alpha, beta in ((F(1), F(2)), (F(2), F(5)), (F(1, 2), F(3, 2))):
            jc = JacobiConstants.from_parameters(alpha, beta)
            assert abs(jc.b) > 1

    def test_equal_parameters_rejected(self):
        with pytest.raises(ValueError):
            JacobiConstants.from_parameters(2, 2)


def test_rational_nullspace_small_system():
    rows = [[F(1), F(2), F(3)], [F(2), F(4), F(6)]]
    basis = rational_nullspace(rows)
    assert len(basis) == 2
    for vec in basis:
        assert sum(r * v for r, v in zip(rows[0], vec)) == 0
