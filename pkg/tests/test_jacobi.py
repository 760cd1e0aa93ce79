"""Jacobi recurrences, constants, quadrature, and coefficient formulas."""

import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.integrate import quad

from geodisc import jacobi
from geodisc.jacobi import (
    WeightFunction,
    ball_coefficient,
    ball_coefficient_quadrature,
    envelope_sweep_max,
    gauss_jacobi_rule,
    jacobi_at_one,
    jacobi_eval,
    norm_constant,
    norm_constant_table,
    radial_average,
    radial_coefficient,
    rep_dimension,
    scaled_jacobi,
    tail_bound,
    truncation_order,
    weight_coefficient,
    weight_coefficient_table,
)
from geodisc.spaces import Family, ball_volume, catalog, make_space

S2 = make_space(Family.SPHERE, 2)
CP2 = make_space(Family.COMPLEX_PROJ, 2)
PARAM_IDS = lambda s: s.label()


def rodrigues_reference(alpha, beta, l, zs):
    """Independent closed form: the l-th derivative construction, evaluated
    symbolically so no recurrence enters."""
    import sympy as sp

    z = sp.symbols("z")
    a = sp.Rational(Fraction(alpha).limit_denominator(4))
    b = sp.Rational(Fraction(beta).limit_denominator(4))
    inner = (1 - z) ** (l + a) * (1 + z) ** (l + b)
    expr = sp.diff(inner, z, l) * (-1) ** l / (2 ** l * sp.factorial(l))
    expr = sp.simplify(expr * (1 - z) ** (-a) * (1 + z) ** (-b))
    fn = sp.lambdify(z, expr, "numpy")
    return np.asarray(fn(zs), dtype=float)


class TestPolynomials:
    def test_degree_zero_and_one(self):
        zs = np.linspace(-1, 1, 11)
        assert np.allclose(jacobi_eval(1.5, 0.5, 0, zs), 1.0)
        for alpha, beta in ((0.0, 0.0), (1.0, 0.0), (7.0, 3.0), (-0.5, -0.5)):
            expect = 0.5 * (alpha + beta + 2) * zs + 0.5 * (alpha - beta)
            assert np.allclose(jacobi_eval(alpha, beta, 1, zs), expect, atol=1e-15)

    @pytest.mark.parametrize("space", catalog(), ids=PARAM_IDS)
    def test_matches_rodrigues_up_to_degree_six(self, space):
        zs = np.linspace(-0.999, 0.999, 201)
        for l in range(2, 7):
            ref = rodrigues_reference(space.alpha, space.beta, l, zs)
            got = jacobi_eval(space.alpha, space.beta, l, zs)
            assert np.abs(got - ref).max() < 1e-10 * max(1.0, np.abs(ref).max())

    @pytest.mark.parametrize("space", catalog(), ids=PARAM_IDS)
    def test_bounded_by_value_at_one(self, space):
        zs = np.linspace(-1, 1, 401)
        for l in (3, 10, 25):
            vals = np.abs(jacobi_eval(space.alpha, space.beta, l, zs))
            assert vals.max() <= jacobi_at_one(space.alpha, space.beta, l) * (1 + 1e-12)

    def test_domain_error(self):
        with pytest.raises(ValueError, match="outside"):
            jacobi_eval(0.0, 0.0, 3, 1.5)

    def test_value_at_one(self):
        assert jacobi_at_one(0.0, 0.0, 0) == 1.0
        assert jacobi_at_one(1.0, 0.0, 3) == pytest.approx(4.0)  # 2*3*4/3!
        for alpha, beta in ((0.0, -0.5), (7.0, 3.0)):
            for l in (1, 5, 17):
                got = jacobi_eval(alpha, beta, l, 1.0)
                assert got == pytest.approx(jacobi_at_one(alpha, beta, l), rel=1e-12)


class TestConstants:
    def test_sphere2_norm_constants(self):
        for l in range(1, 30):
            assert norm_constant(0.0, 0.0, l) == pytest.approx(2 * l + 1, rel=1e-13)

    def test_degree_zero_is_kappa(self):
        for space in catalog():
            assert norm_constant(space.alpha, space.beta, 0) == pytest.approx(
                space.kappa, rel=1e-12)

    def test_complex_projective_degree_one(self):
        # (2l + alpha + beta + 1) at l=1, (alpha, beta) = (1, 0) gives 4;
        # confirmed against the orthogonality integral below
        assert norm_constant(1.0, 0.0, 1) == pytest.approx(4.0)
        z, w = gauss_jacobi_rule(1.0, 0.0, 24)
        p1 = jacobi_eval(1.0, 0.0, 1, z)
        integral = 0.5 ** 2 * float(np.dot(w, p1 * p1))  # 2^-(a+b+1) prefactor
        assert integral == pytest.approx(0.25, rel=1e-12)

    def test_table_matches_pointwise(self):
        for space in catalog():
            table = norm_constant_table(space.alpha, space.beta, 40)
            for l in (1, 2, 17, 40):
                assert table[l - 1] == pytest.approx(
                    norm_constant(space.alpha, space.beta, l), rel=1e-12)

    def test_rep_dimension_on_sphere2(self):
        # eigenspace dimensions on S^2 are 2l + 1
        for l in range(1, 8):
            assert rep_dimension(0.0, 0.0, l) == pytest.approx(2 * l + 1, rel=1e-12)

    def test_growth_rate(self):
        for space in catalog():
            big = norm_constant(space.alpha, space.beta, 4000)
            assert big / 4000 == pytest.approx(2.0, rel=0.02)


class TestOrthogonality:
    @pytest.mark.parametrize("space", catalog(), ids=PARAM_IDS)
    def test_orthonormality_to_degree_fifty(self, space):
        alpha, beta = space.alpha, space.beta
        m = 64
        z, w = gauss_jacobi_rule(alpha, beta, m)
        P = np.stack([jacobi_eval(alpha, beta, l, z) for l in range(51)])
        G = (P * w) @ P.T * 0.5 ** (alpha + beta + 1.0)
        target = np.diag([1.0 / norm_constant(alpha, beta, l) for l in range(51)])
        assert np.abs(G - target).max() < 1e-10

    def test_rule_basics(self):
        z, w = gauss_jacobi_rule(0.0, 0.0, 1)
        assert z[0] == pytest.approx(0.0, abs=1e-15)
        assert w[0] == pytest.approx(2.0)
        for alpha, beta in ((0.0, 0.0), (7.0, 3.0), (-0.5, -0.5), (16.0, 8.0)):
            _, w = gauss_jacobi_rule(alpha, beta, 31)
            total = 2.0 ** (alpha + beta + 1) * math.exp(
                math.lgamma(alpha + 1) + math.lgamma(beta + 1)
                - math.lgamma(alpha + beta + 2))
            assert w.sum() == pytest.approx(total, rel=1e-12)

    def test_radial_average_of_constant(self):
        for space in catalog():
            assert radial_average(space, lambda z: np.ones_like(z)) == pytest.approx(
                1.0, rel=1e-12)


class TestBallCoefficient:
    def test_endpoints_vanish(self):
        for l in (1, 2, 5):
            assert ball_coefficient(S2, l, 0.0) == 0.0
            assert ball_coefficient(S2, l, math.pi) == pytest.approx(0.0, abs=1e-14)

    def test_sphere2_degree_one_closed_form(self):
        # integral of cos(u) sin(u)/2 over [0, r] = sin^2(r/2) cos^2(r/2)
        for r in np.linspace(0.1, 3.0, 17):
            expect = math.sin(0.5 * r) ** 2 * math.cos(0.5 * r) ** 2
            assert ball_coefficient(S2, 1, r) == pytest.approx(expect, abs=1e-14)

    @pytest.mark.parametrize("space", catalog(), ids=PARAM_IDS)
    def test_closed_form_equals_quadrature(self, space):
        for l in range(0, 9):
            for r in (0.4, 1.1, math.pi / 2, 2.3, 2.9):
                assert ball_coefficient(space, l, r) == pytest.approx(
                    ball_coefficient_quadrature(space, l, r), abs=1e-10)

    def test_degree_zero_is_scaled_volume(self):
        for space in catalog():
            r = 1.3
            assert ball_coefficient(space, 0, r) == pytest.approx(
                ball_volume(space, r) / space.kappa, rel=1e-12)


class TestRadialCoefficient:
    def test_endpoints_and_value(self):
        assert radial_coefficient(S2, 3, 0.0) == 0.0
        assert radial_coefficient(S2, 3, math.pi) == pytest.approx(0.0, abs=1e-25)
        # (sin pi/4)^4 (cos pi/4)^4 * P0^2 = 1/16 at l = 1, r = pi/2
        assert radial_coefficient(S2, 1, math.pi / 2) == pytest.approx(1.0 / 16)

    def test_square_of_ball_coefficient(self):
        for space in (S2, CP2):
            for l in (1, 2, 6):
                for r in (0.7, 1.9):
                    assert radial_coefficient(space, l, r) == pytest.approx(
                        (l * ball_coefficient(space, l, r)) ** 2, rel=1e-12)

    @pytest.mark.parametrize("space", catalog(), ids=PARAM_IDS)
    def test_parseval_sum(self, space):
        # kappa sum l^-2 M_l a_l(r) -> v_r (1 - v_r)
        from geodisc import backend
        for r in (math.pi / 4, math.pi / 2, 3 * math.pi / 4):
            L = truncation_order(space, 1e-6, r=r)
            c = backend.radial_coefficients(space.alpha, space.beta, space.kappa,
                                            math.cos(r), L)
            v = ball_volume(space, r)
            assert abs(c.sum() - v * (1 - v)) <= tail_bound(space, L, r=r)


class TestWeightFunctions:
    def test_masses(self):
        assert WeightFunction.sin().total_mass() == pytest.approx(2.0)
        assert WeightFunction.const().total_mass() == pytest.approx(math.pi)
        assert WeightFunction.indicator(1.2).total_mass() == pytest.approx(1.2)
        tab = WeightFunction.tabulated([0.0, math.pi], [1.0, 1.0])
        assert tab.total_mass() == pytest.approx(math.pi)

    def test_class_norms_against_quadrature(self):
        for space in (S2, CP2):
            d, d0 = space.d, space.d0
            for wt in (WeightFunction.sin(), WeightFunction.const(),
                       WeightFunction.indicator(2.0)):
                direct, _ = quad(
                    lambda r: math.sin(0.5 * r) ** (d - 1)
                    * math.cos(0.5 * r) ** (d0 - 1) * wt(r), 0, math.pi, limit=200)
                assert wt.class_norm(d, d0) == pytest.approx(direct, rel=1e-9)

    def test_validation(self):
        with pytest.raises(ValueError):
            WeightFunction.indicator(0.0)
        with pytest.raises(ValueError, match="nonnegative"):
            WeightFunction.tabulated([0.0, 1.0, 2.0], [0.5, -0.1, 0.2])
        with pytest.raises(ValueError):
            WeightFunction.tabulated([0.5, 0.4], [1.0, 1.0])

    def test_radius_sampling_matches_cdf(self):
        rng = np.random.default_rng(5)
        for wt in (WeightFunction.sin(), WeightFunction.const(),
                   WeightFunction.indicator(2.1),
                   WeightFunction.tabulated([0.0, 1.0, 3.0], [0.0, 2.0, 1.0])):
            draws = np.sort(wt.sample_radii(20_000, rng))
            # empirical CDF against the normalized integral of the weight
            grid = np.linspace(0, math.pi, 600)
            dens = wt(grid)
            cdf = np.concatenate([[0], np.cumsum(0.5 * (dens[1:] + dens[:-1])
                                                 * np.diff(grid))])
            cdf /= cdf[-1]
            emp = np.searchsorted(draws, grid) / len(draws)
            assert np.abs(emp - cdf).max() < 0.02


class TestWeightCoefficients:
    def test_indicator_equals_integral_of_radial_coefficient(self):
        r0 = 1.4
        wt = WeightFunction.indicator(r0)
        for space in (S2, CP2):
            for l in (1, 3, 8):
                direct, _ = quad(lambda u: radial_coefficient(space, l, u),
                                 0.0, r0, limit=200)
                assert weight_coefficient(space, l, wt) == pytest.approx(
                    direct, abs=1e-11)

    @pytest.mark.parametrize("space", catalog(), ids=PARAM_IDS)
    def test_dual_quadrature_oracle(self, space):
        # refining-trapezoid oracle vs the Gauss-Jacobi route
        for wt in (WeightFunction.sin(), WeightFunction.const()):
            table = weight_coefficient_table(space, wt, 6)
            for l in (1, 4, 6):
                ref, n = 0.0, 4096
                for trial in range(3):
                    u = np.linspace(0, math.pi, n + 1)
                    f = wt(u) * np.array([radial_coefficient(space, l, float(r))
                                          for r in u])
                    new = float(np.trapezoid(f, u))
                    if trial and abs(new - ref) < 1e-10:
                        ref = new
                        break
                    ref, n = new, 2 * n
                assert table[l - 1] == pytest.approx(ref, abs=1e-9)

    def test_sin_weight_scaling_in_degree(self):
        # l * A_l stays within positive bounds across l <= 500
        for space in (S2, CP2):
            A = weight_coefficient_table(space, WeightFunction.sin(), 500)
            scaled = A * np.arange(1, 501)
            assert scaled.min() > 0
            assert scaled.max() / scaled[9:].min() < 10.0

    def test_tabulated_table_runs(self):
        wt = WeightFunction.tabulated([0.0, 1.5, math.pi], [0.5, 1.0, 0.0])
        table = weight_coefficient_table(S2, wt, 12)
        direct, _ = quad(lambda u: wt(u) * radial_coefficient(S2, 3, u),
                         0.0, math.pi, limit=300)
        assert table[2] == pytest.approx(direct, abs=1e-9)


class TestEnvelopeAndTruncation:
    @pytest.mark.parametrize("space", catalog(), ids=PARAM_IDS)
    def test_no_growth_trend(self, space):
        # max over l <= 100 versus l <= 500 agree within 1.5x
        small = envelope_sweep_max(space, 100, grid=101)
        large = envelope_sweep_max(space, 500, grid=101)
        assert large <= 1.5 * small

    def test_truncation_order_solves_tail(self):
        for space in (S2, CP2):
            for tol in (1e-4, 1e-6):
                L = truncation_order(space, tol, r=1.0)
                assert tail_bound(space, L, r=1.0) <= tol
        with pytest.raises(ValueError, match="relax"):
            truncation_order(make_space(Family.OCT_PROJ, 2), 1e-12, r=1.5)

    def test_scaled_jacobi_uniform_bound(self):
        # (l+1)^(1/2) |J_l| stays within a factor-2 band across degrees
        rs = np.linspace(0.05, math.pi - 0.05, 301)
        for space in (S2, CP2):
            peaks = []
            for l in (10, 50, 100, 500):
                vals = np.abs(scaled_jacobi(space.alpha, space.beta, l, rs))
                peaks.append(math.sqrt(l + 1.0) * vals.max())
            assert max(peaks) / min(peaks) < 2.0

    def test_scaled_jacobi_asymptotic(self):
        # interior cosine law with O((l sin r)^-1) error, alpha = beta = 0
        l, r = 200, math.pi / 2
        main = math.sqrt(1.0 / (math.pi * l)) * math.cos((l + 0.5) * r - math.pi / 4)
        err = abs(scaled_jacobi(0.0, 0.0, l, r) - main)
        assert err < 0.5 / (l * math.sin(r)) * math.sqrt(1.0 / (math.pi * l)) * 10

    def test_scaled_jacobi_at_zero(self):
        for space in (S2, CP2):  # alpha > -1/2 makes the prefactor vanish
            assert scaled_jacobi(space.alpha, space.beta, 7, 0.0) == 0.0

    @pytest.mark.parametrize("space", [S2, CP2], ids=PARAM_IDS)
    def test_weighted_floor_lemma(self, space):
        # A_l(sin) r^(d-1) / a_l(r) admits a positive floor over the sweep
        A = weight_coefficient_table(space, WeightFunction.sin(), 300)
        floor = math.inf
        for r in np.linspace(0.3, math.pi - 0.3, 9):
            for l in range(1, 301, 7):
                a = radial_coefficient(space, l, float(r))
                if a > 1e-30:
                    floor = min(floor, A[l - 1] * r ** (space.d - 1) / a)
        assert 0.0 < floor < math.inf
