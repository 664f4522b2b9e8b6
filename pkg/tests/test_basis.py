import math

import numpy as np
import pytest
from scipy import integrate

from src.core.basis import (
    FULL,
    HALF,
    BasisSpec,
    Expansion,
    clenshaw_eval,
    derivative_pointwise,
    diff_coeffs,
    diff_matrix,
    log_weight,
    phi,
    phi_batch,
    phi_full,
    phi_half,
)
from src.core.errors import DomainError
from src.core.jacobi import gauss_jacobi


def sech(x):
    return 1.0 / np.cosh(x)


class TestBasisSpec:
    def test_half_mode_requires_equal_params(self):
        with pytest.raises(DomainError, match="half mode requires alpha = beta"):
            BasisSpec.of(0.5, 0.0, HALF)

    def test_mode_check(self):
        with pytest.raises(DomainError):
            BasisSpec.of(0.0, 0.0, "both")

    def test_half_params(self):
        spec = BasisSpec.of(0.5, 0.5, HALF)
        assert (spec.half_even.alpha, spec.half_even.beta) == (0.5, -0.5)
        assert (spec.half_odd.alpha, spec.half_odd.beta) == (0.5, 0.5)


class TestExpansion:
    def test_coefficients_are_read_only(self, cheb_t):
        e = Expansion(cheb_t, [1.0, 2.0])
        with pytest.raises(ValueError):
            e.coeffs[0] = 3.0

    def test_rejects_empty_and_non_finite(self, cheb_t):
        with pytest.raises(DomainError):
            Expansion(cheb_t, [])
        with pytest.raises(DomainError):
            Expansion(cheb_t, [1.0, float("inf")])

    def test_tail(self, cheb_t):
        assert Expansion(cheb_t, [1.0, -0.25]).tail == 0.25


class TestPhi:
    def test_phi0_chebyshev_t(self, cheb_t):
        assert phi_full(cheb_t, 0, 0.0) == pytest.approx(1.0 / math.sqrt(math.pi), rel=1e-14)

    def test_phi0_chebyshev_u(self, cheb_u):
        expected = math.sqrt(2.0 / math.pi) * sech(1.0) ** 1.5
        assert phi_full(cheb_u, 0, 1.0) == pytest.approx(expected, rel=1e-14)

    def test_phi1_chebyshev_t(self, cheb_t):
        # φ_1 = -sqrt(2/π) sech^{1/2} x tanh x
        x = np.linspace(-3, 3, 13)
        expected = -math.sqrt(2.0 / math.pi) * np.sqrt(sech(x)) * np.tanh(x)
        np.testing.assert_allclose(phi_full(cheb_t, 1, x), expected, atol=1e-15)

    @pytest.mark.parametrize("alpha", [-0.5, 0.0, 1.5])
    def test_odd_index_vanishes_at_origin(self, alpha):
        spec = BasisSpec.of(alpha, alpha)
        half = BasisSpec.of(alpha, alpha, HALF)
        for m in (1, 3, 5):
            assert phi_full(spec, m, 0.0) == pytest.approx(0.0, abs=1e-14)
            assert phi_half(half, m, 0.0) == pytest.approx(0.0, abs=1e-15)

    def test_half_phi0_matches_full(self):
        assert phi_half(BasisSpec.of(-0.5, -0.5, HALF), 0, 0.0) == pytest.approx(1 / math.sqrt(math.pi), rel=1e-14)

    @pytest.mark.parametrize("alpha", [-0.5, 0.0, 0.7, 2.0])
    def test_half_and_full_bases_coincide(self, alpha):
        full = BasisSpec.of(alpha, alpha)
        half = BasisSpec.of(alpha, alpha, HALF)
        x = np.linspace(-4.0, 4.0, 17)
        np.testing.assert_allclose(phi_batch(half, 9, x), phi_batch(full, 9, x), rtol=1e-11, atol=1e-13)

    def test_legendre_m2_half_equals_full(self):
        value = phi_half(BasisSpec.of(0.0, 0.0, HALF), 2, 0.7)
        assert value == pytest.approx(phi_full(BasisSpec.of(0.0, 0.0), 2, 0.7), rel=1e-12)

    def test_wrong_mode(self, cheb_t):
        with pytest.raises(DomainError):
            phi_half(cheb_t, 0, 0.0)
        with pytest.raises(DomainError):
            phi_full(BasisSpec.of(0.0, 0.0, HALF), 0, 0.0)

    @pytest.mark.parametrize("ab", [(-0.5, -0.5), (0.5, -0.5), (0.3, 1.7)])
    def test_orthonormal_on_real_line(self, ab):
        spec = BasisSpec.of(*ab)
        for i, j in [(0, 0), (1, 1), (2, 2), (0, 2), (1, 3)]:
            value, _ = integrate.quad(
                lambda x: phi(spec, i, x) * phi(spec, j, x), -60, 60, limit=400, epsabs=1e-12, epsrel=1e-12
            )
            assert value == pytest.approx(float(i == j), abs=1e-9)

    def test_large_argument_does_not_underflow_to_nan(self, cheb_u):
        values = phi_batch(cheb_u, 4, np.array([-800.0, 800.0]))
        assert np.all(np.isfinite(values))

    def test_log_weight(self, cheb_t):
        x = np.array([-2.0, 0.0, 3.0])
        np.testing.assert_allclose(np.exp(log_weight(cheb_t.params, x)), np.sqrt(sech(x)), rtol=1e-14)


class TestDiffCoeffs:
    def test_chebyshev_u(self):
        b = diff_coeffs(BasisSpec.of(0.5, 0.5).params, 6).b
        np.testing.assert_allclose(b, (np.arange(6) + 1.5) / 2.0, rtol=1e-14)

    def test_chebyshev_t(self):
        b = diff_coeffs(BasisSpec.of(-0.5, -0.5).params, 4).b
        assert b[0] == pytest.approx(math.sqrt(2.0) / 4.0, rel=1e-14)
        assert b[1] == pytest.approx(0.75, rel=1e-14)
        assert b[3] == pytest.approx(1.75, rel=1e-14)

    def test_b0_matches_projection(self, cheb_t):
        # b_0 = ∫ φ_0' φ_1 dx
        h = 1e-6

        def integrand(x):
            d0 = (phi_full(cheb_t, 0, x + h) - phi_full(cheb_t, 0, x - h)) / (2 * h)
            return d0 * phi_full(cheb_t, 1, x)

        value, _ = integrate.quad(integrand, -50, 50, limit=400, epsabs=1e-11)
        assert value == pytest.approx(diff_coeffs(cheb_t.params, 1).b[0], abs=1e-7)

    def test_positive(self, params):
        assert np.all(diff_coeffs(params, 20).b > 0)

    def test_matrix_is_skew(self, params):
        D = diff_matrix(diff_coeffs(params, 10), 10)
        np.testing.assert_array_equal(D, -D.T)
        assert np.count_nonzero(np.triu(D, 2)) == 0


class TestClenshaw:
    def test_unit_coefficients(self, params):
        spec = BasisSpec(params)
        x = np.linspace(-3, 3, 11)
        np.testing.assert_allclose(clenshaw_eval(Expansion(spec, [1.0]), x), phi_full(spec, 0, x), atol=1e-15)
        e5 = Expansion(spec, np.eye(8)[5])
        np.testing.assert_allclose(clenshaw_eval(e5, x), phi_full(spec, 5, x), atol=1e-13)

    @pytest.mark.parametrize("mode", [FULL, HALF])
    def test_matches_naive_sum(self, rng, mode):
        spec = BasisSpec.of(0.5, 0.5, mode)
        c = rng.standard_normal(32)
        naive = float(c @ phi_batch(spec, 31, np.array([-1.3]))[:, 0])
        assert Expansion(spec, c)(-1.3) == pytest.approx(naive, rel=1e-12, abs=1e-13)

    def test_scalar_in_scalar_out(self, cheb_t):
        assert isinstance(Expansion(cheb_t, [1.0, 2.0])(0.5), float)


class TestDerivativePointwise:
    def test_phi0_t_at_origin(self, cheb_t):
        assert derivative_pointwise(cheb_t, 0, 0.0) == pytest.approx(0.0, abs=1e-15)

    def test_phi0_u(self, cheb_u):
        assert derivative_pointwise(cheb_u, 0, 0.5) == pytest.approx(0.75 * phi_full(cheb_u, 1, 0.5), rel=1e-14)

    @pytest.mark.parametrize("m", [0, 1, 2, 5])
    def test_finite_difference(self, params, m):
        spec = BasisSpec(params)
        h = 1e-5
        for x in (-1.7, 0.3, 2.2):
            fd = (phi_full(spec, m, x + h) - phi_full(spec, m, x - h)) / (2 * h)
            assert derivative_pointwise(spec, m, x) == pytest.approx(fd, abs=1e-8)


class TestGramMatrix:
    @pytest.mark.parametrize("ab", [(-0.5, -0.5), (0.5, 0.5), (-0.5, 0.5), (0.0, 0.0), (1.3, 0.2)])
    def test_first_32_functions_are_orthonormal(self, ab):
        # ∫ φ_i φ_j dx 换元到 t = tanh x：dx = dt / (1 - t^2)
        spec = BasisSpec.of(*ab)
        p = spec.params
        rule = gauss_jacobi(p, 256)
        t = rule.nodes
        phis = phi_batch(spec, 31, np.arctanh(t))
        inverse_weight = np.exp(-(p.alpha + 1.0) * np.log1p(-t) - (p.beta + 1.0) * np.log1p(t))
        gram = (phis * (rule.weights * inverse_weight)[None, :]) @ phis.T
        assert np.max(np.abs(gram - np.eye(32))) <= 1e-9
