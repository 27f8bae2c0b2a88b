"""Gauss rules and convergence-controlled integration for the rational weights."""

import math
from fractions import Fraction as F

import numpy as np
import pytest
from scipy.integrate import quad as adaptive_quad

from exopoly import quad
from exopoly.quad import QuadratureError, WeightSpec, golub_welsch, gram_matrix, integrate

from oracles import jacobi_moment, laguerre_moment, log_laguerre_moment


class TestGolubWelsch:
    def test_legendre_two_point(self):
        rule = golub_welsch(quad.legendre_recurrence(2), 2)
        assert rule.nodes == pytest.approx([-1 / math.sqrt(3), 1 / math.sqrt(3)])
        assert rule.weights == pytest.approx([1.0, 1.0])
        assert rule.exact_degree == 3

    def test_laguerre_one_point_from_moments(self):
        k = F(1, 2)
        w = WeightSpec.laguerre(k)
        rule = golub_welsch(quad.recurrence_coefficients(w, 1), 1)
        # node = first moment / mass, weight = mass
        assert rule.nodes == pytest.approx([1.5])
        assert rule.weights == pytest.approx([math.gamma(1.5)])

    def test_jacobi_one_point_from_moments(self):
        alpha, beta = 1.0, 2.0
        w = WeightSpec.jacobi(1, 2)
        rule = golub_welsch(quad.recurrence_coefficients(w, 1), 1)
        mass = jacobi_moment(alpha, beta, 0)
        mean = jacobi_moment(alpha, beta, 1) / mass
        assert rule.nodes == pytest.approx([mean])
        assert rule.nodes == pytest.approx([(beta - alpha) / (alpha + beta + 2)])
        assert rule.weights == pytest.approx([mass])

    @pytest.mark.parametrize("n", [1, 2, 5, 16])
    def test_exactness_through_degree_2n_minus_1(self, n):
        w = WeightSpec.laguerre(F(3, 2))
        rule = golub_welsch(quad.recurrence_coefficients(w, n), n)
        for p in range(2 * n):
            scale = log_laguerre_moment(1.5, p)
            approx = rule.integrate(lambda x: np.exp(p * np.log(x) - scale))
            assert abs(approx - 1.0) < 1e-12, (n, p)
        wj = WeightSpec.jacobi(F(1, 2), F(3, 2))
        rule = golub_welsch(quad.recurrence_coefficients(wj, n), n)
        mass = jacobi_moment(F(1, 2), F(3, 2), 0)
        for p in range(2 * n):
            exact = jacobi_moment(F(1, 2), F(3, 2), p)
            # relative to the weight mass: odd-ish moments pass through zero
            assert abs(rule.integrate(lambda x: x**p) - exact) < 1e-12 * mass, (n, p)

    @pytest.mark.parametrize("make", [
        lambda: WeightSpec.laguerre(F(1)),
        lambda: WeightSpec.laguerre(F(7, 2)),
        lambda: WeightSpec.jacobi(F(2), F(5)),
        lambda: WeightSpec.jacobi(F(1, 2), F(3, 2)),
    ])
    def test_weights_positive_up_to_128(self, make):
        w = make()
        for n in (16, 64, 128):
            rule = golub_welsch(quad.recurrence_coefficients(w, n), n)
            assert np.all(rule.weights > 0)
            assert np.all(np.diff(rule.nodes) > 0)

    def test_rule_csv(self):
        rule = golub_welsch(quad.legendre_recurrence(2), 2)
        text = rule.to_csv(header="rule=legendre,n=2")
        assert text.startswith("# rule=legendre,n=2\nnode,weight\n")
        assert len(text.strip().splitlines()) == 4


class TestIntegrate:
    def test_plain_exponential_mass(self):
        assert integrate(lambda x: np.ones_like(x), WeightSpec.laguerre(0)) == pytest.approx(1.0)

    def test_x1_laguerre_against_adaptive_oracle(self):
        val = integrate(lambda x: np.ones_like(x), WeightSpec.x1_laguerre(1))
        oracle, err = adaptive_quad(lambda x: x * np.exp(-x) / (x + 1) ** 2, 0, np.inf,
                                    epsabs=1e-14, epsrel=1e-14, limit=400)
        assert err < 1e-13
        assert abs(val - oracle) < 1e-12

    def test_rational_factor_cancellation(self):
        # (x+k+1)(x+k)^2 under the rational weight reduces to pure Gamma moments
        k = F(7, 2)
        kf = float(k)
        val = integrate(
            lambda x: (x + kf + 1) * (x + kf) ** 2, WeightSpec.x1_laguerre(k)
        )
        exact = laguerre_moment(kf, 1) + (kf + 1) * laguerre_moment(kf, 0)
        assert abs(val - exact) < 1e-12 * exact

    def test_linearity(self):
        w = WeightSpec.x1_laguerre(2)
        f = lambda x: (1 + x) ** 2
        g = lambda x: x**2
        lhs = integrate(lambda x: f(x) + g(x), w)
        fi, gi = integrate(f, w), integrate(g, w)
        assert abs(lhs - fi - gi) < 1e-12 * (abs(fi) + abs(gi))

    def test_nonconvergence_is_loud(self):
        with pytest.raises(QuadratureError):
            integrate(lambda x: 1.0 / (x + 1e-3), WeightSpec.laguerre(0), max_nodes=32)

    def test_exact_zero_integrand(self):
        assert integrate(lambda x: np.zeros_like(x), WeightSpec.jacobi(1, 2)) == 0.0

    def test_x1_jacobi_nodes_clear_the_pole(self):
        w = WeightSpec.x1_jacobi(F(1), F(2))
        b = float(w.b_constant)
        rule = quad.gauss_rule(w, 64)
        assert np.min(np.abs(rule.nodes - b)) > abs(b) - 1 > 0


class TestGramMatrix:
    def test_classical_laguerre_norms(self):
        k = F(3, 2)
        kf = float(k)
        polys = [  # classical members, exact coefficients
            __import__("exopoly").laguerre_classical(n, k) for n in range(4)
        ]
        g = gram_matrix(polys, WeightSpec.laguerre(k))
        for n in range(4):
            expected = math.gamma(kf + n + 1) / math.factorial(n)
            assert g[n, n] == pytest.approx(expected, rel=1e-13)
        off = np.abs(g - np.diag(np.diag(g)))
        assert np.max(off) < 1e-12 * np.max(np.diag(g))

    def test_single_polynomial_positive_norm(self):
        g = gram_matrix([np.array([1.0, 2.0])], WeightSpec.jacobi(1, 1))
        assert g.shape == (1, 1)
        assert g[0, 0] > 0

    def test_symmetry_exact(self):
        k = F(1)
        polys = [np.array([1.0]), np.array([0.0, 1.0]), np.array([1.0, 0.0, 2.0])]
        g = gram_matrix(polys, WeightSpec.x1_laguerre(k))
        assert np.array_equal(g, g.T)


class TestWeightSpec:
    def test_x1_jacobi_pole_guard(self):
        with pytest.raises(ValueError):
            WeightSpec.x1_jacobi(F(1), F(1))  # alpha == beta
        # alpha=-1/2, beta=1/2 gives b = 0: pole inside the interval
        with pytest.raises(ValueError):
            WeightSpec.x1_jacobi(F(-1, 2), F(1, 2))

    def test_x1_laguerre_requires_positive_k(self):
        with pytest.raises(ValueError):
            WeightSpec.x1_laguerre(0)

    def test_density_matches_kind(self):
        w = WeightSpec.x1_laguerre(F(2))
        x = np.array([0.5, 1.0, 3.0])
        assert w.density(x) == pytest.approx(x**2 * np.exp(-x) / (x + 2) ** 2)
        wj = WeightSpec.x1_jacobi(F(1), F(2))
        z = np.array([-0.5, 0.0, 0.5])
        b = float(wj.b_constant)
        assert wj.density(z) == pytest.approx((1 - z) * (1 + z) ** 2 / (z - b) ** 2)
