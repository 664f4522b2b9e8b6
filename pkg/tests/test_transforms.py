import math
import time

import numpy as np
import pytest
from scipy import integrate, special

from src.core.basis import HALF, BasisSpec, Expansion, phi_batch, phi_full
from src.core.errors import DomainError, NonFiniteSampleError
from src.core.jacobi import orthonormal_eval_batch
from src.core.special_fn import JacobiParams
from src.core.transforms import (
    TRIG_KINDS,
    analyze,
    analyze_full,
    analyze_half,
    analyze_multiplier,
    dct,
    dct_direct,
    full_grid,
    jacobi_coefficients,
    jacobi_transform,
    multiplier_eval,
    synthesize,
)

CHEBYSHEV = [(-0.5, -0.5), (0.5, 0.5), (0.5, -0.5), (-0.5, 0.5)]


def sech(x):
    return 1.0 / np.cosh(x)


class TestDct:
    def test_constant_dct2(self):
        np.testing.assert_allclose(dct("DCT-II", [1, 1, 1, 1]), [4, 0, 0, 0], atol=1e-14)

    def test_zero_dst2(self):
        np.testing.assert_array_equal(dct("DST-II", np.zeros(4)), np.zeros(4))

    @pytest.mark.parametrize("kind", TRIG_KINDS)
    @pytest.mark.parametrize("n", [2, 7, 64])
    def test_matches_direct_sum(self, rng, kind, n):
        x = rng.standard_normal(n)
        np.testing.assert_allclose(dct(kind, x), dct_direct(kind, x), atol=1e-12 * n)

    def test_kind_aliases(self):
        x = [1.0, 2.0, 3.0]
        np.testing.assert_array_equal(dct("dct_ii", x), dct("DCT-II", x))

    def test_unknown_kind(self):
        with pytest.raises(DomainError):
            dct("DCT-III", [1.0, 2.0])

    def test_dct1_needs_two_points(self):
        with pytest.raises(DomainError):
            dct("DCT-I", [1.0])


class TestJacobiCoefficients:
    @pytest.mark.parametrize("ab", CHEBYSHEV)
    def test_fast_matches_gauss(self, ab):
        params = JacobiParams(*ab)

        def G(t):
            return np.exp(t) * np.cos(2 * t)

        fast = jacobi_coefficients(params, G, 24, fast=True)
        slow = jacobi_coefficients(params, G, 24, fast=False)
        np.testing.assert_allclose(fast, slow, atol=1e-13)

    def test_fast_grid_only_for_chebyshev(self):
        assert full_grid(JacobiParams(-0.5, 0.5), 8).fast
        assert not full_grid(JacobiParams(0.3, 1.7), 8).fast

    def test_general_params_projection(self):
        params = JacobiParams(0.3, 1.7)

        def G(t):
            q = orthonormal_eval_batch(params, 4, t)
            return 2 * q[1] - q[4]

        coeffs = jacobi_coefficients(params, G, 10)
        expected = np.zeros(10)
        expected[1], expected[4] = 2.0, -1.0
        np.testing.assert_allclose(coeffs, expected, atol=1e-13)


class TestAnalyzeFull:
    def test_phi0_t(self, cheb_t):
        e = analyze_full(cheb_t, lambda x: phi_full(cheb_t, 0, x), 16)
        np.testing.assert_allclose(e.coeffs, np.eye(16)[0], atol=1e-12)

    def test_phi3_u(self, cheb_u):
        e = analyze_full(cheb_u, lambda x: phi_full(cheb_u, 3, x), 16)
        np.testing.assert_allclose(e.coeffs, np.eye(16)[3], atol=1e-12)

    @pytest.mark.parametrize("ab", CHEBYSHEV + [(0.0, 0.0), (0.3, 1.7)])
    def test_basis_functions_recovered(self, ab):
        spec = BasisSpec.of(*ab)
        for m in (0, 1, 4):
            e = analyze_full(spec, lambda x: phi_full(spec, m, x), 12)
            np.testing.assert_allclose(e.coeffs, np.eye(12)[m], atol=1e-11)

    def test_sech_three_halves_against_gauss_path(self, cheb_u):
        f = lambda x: sech(x) ** 1.5
        fast = analyze_full(cheb_u, f, 64, fast=True)
        slow = analyze_full(cheb_u, f, 64, fast=False)
        np.testing.assert_allclose(fast.coeffs, slow.coeffs, atol=1e-11)
        # sech^{3/2} = sqrt(π/2) φ_0
        assert fast.coeffs[0] == pytest.approx(math.sqrt(math.pi / 2), rel=1e-13)

    def test_sech_tanh_is_first_basis_function(self, cheb_t):
        e = analyze_full(cheb_t, lambda x: np.sqrt(sech(x)) * np.tanh(x), 8)
        expected = np.zeros(8)
        expected[1] = -math.sqrt(math.pi / 2)
        np.testing.assert_allclose(e.coeffs, expected, atol=1e-13)

    def test_round_trip_at_origin(self, cheb_t):
        f = lambda x: np.exp(-x * x) * sech(x)
        e = analyze_full(cheb_t, f, 64)
        assert synthesize(e, [0.0])[0] == pytest.approx(1.0, abs=1e-8)

    def test_scalar_only_callable(self, cheb_t):
        e = analyze_full(cheb_t, lambda x: math.exp(-x * x) / math.cosh(x), 16)
        ref = analyze_full(cheb_t, lambda x: np.exp(-x * x) * sech(x), 16)
        np.testing.assert_allclose(e.coeffs, ref.coeffs, atol=1e-14)

    def test_non_finite_sample(self, cheb_t):
        with pytest.raises(NonFiniteSampleError) as info:
            analyze_full(cheb_t, lambda x: np.where(np.abs(x) < 0.2, np.nan, 0.0), 16)
        assert abs(info.value.x) < 0.2

    def test_wrong_mode(self):
        with pytest.raises(DomainError):
            analyze_full(BasisSpec.of(0.0, 0.0, HALF), np.exp, 8)


class TestAnalyzeHalf:
    @pytest.mark.parametrize("alpha", [-0.5, 0.0, 0.5, 1.3])
    def test_even_function_has_no_odd_coefficients(self, alpha):
        spec = BasisSpec.of(alpha, alpha, HALF)
        e = analyze_half(spec, lambda x: np.exp(-x * x) * sech(x) ** (1 + alpha), 32)
        np.testing.assert_allclose(e.coeffs[1::2], 0.0, atol=1e-13)

    @pytest.mark.parametrize("alpha", [-0.5, 0.5, 2.0])
    def test_basis_function_recovered(self, alpha):
        spec = BasisSpec.of(alpha, alpha, HALF)
        for m in (1, 2, 5):
            e = analyze_half(spec, lambda x: phi_batch(spec, m, x)[m], 16)
            np.testing.assert_allclose(e.coeffs, np.eye(16)[m], atol=1e-12)

    def test_matches_full_range_coefficients(self):
        # f = sech^{1/2}(1 + tanh + tanh^2)：两种分解下 F 都是多项式
        f = lambda x: np.sqrt(sech(x)) * (1 + np.tanh(x) + np.tanh(x) ** 2)
        half = analyze_half(BasisSpec.of(-0.5, -0.5, HALF), f, 64)
        full = analyze_full(BasisSpec.of(-0.5, -0.5), f, 64)
        np.testing.assert_allclose(half.coeffs, full.coeffs, atol=1e-10)

    @pytest.mark.parametrize("fast", [True, False])
    def test_round_trip(self, fast):
        spec = BasisSpec.of(0.5, 0.5, HALF)
        f = lambda x: np.exp(-((x - 0.2) ** 2)) * sech(x) ** 1.5
        e = analyze(spec, f, 96, fast=fast)
        x = np.linspace(-4, 4, 9)
        np.testing.assert_allclose(synthesize(e, x), f(x), atol=1e-8)

    def test_odd_size_rejected(self):
        with pytest.raises(DomainError, match="even N"):
            analyze_half(BasisSpec.of(0.0, 0.0, HALF), np.exp, 15)


class TestSynthesize:
    def test_zero(self, cheb_t):
        np.testing.assert_array_equal(synthesize(Expansion(cheb_t, np.zeros(5)), [0.0, 1.0]), [0.0, 0.0])

    def test_unit_vector(self, cheb_u):
        x = np.linspace(-2, 2, 5)
        np.testing.assert_allclose(synthesize(Expansion(cheb_u, [1.0]), x), phi_full(cheb_u, 0, x), atol=1e-15)


class TestMultiplier:
    def test_constant(self):
        a = analyze_multiplier(lambda x: np.full_like(x, 3.0), 4)
        np.testing.assert_allclose(a, [3.0 * math.sqrt(2.0), 0.0, 0.0, 0.0], atol=1e-13)

    def test_tanh(self):
        a = analyze_multiplier(np.tanh, 3)
        np.testing.assert_allclose(a, [0.0, 1.0, 0.0], atol=1e-13)

    def test_eval_round_trip(self):
        fn = lambda x: 2.0 + np.tanh(x) - 0.5 * np.tanh(x) ** 3
        a = analyze_multiplier(fn, 6)
        x = np.linspace(-5, 5, 21)
        np.testing.assert_allclose(multiplier_eval(a, x), fn(x), atol=1e-13)


class TestRoundTrip:
    @pytest.mark.parametrize("ab", CHEBYSHEV)
    @pytest.mark.parametrize("n", [8, 64, 256])
    def test_chebyshev_kinds(self, rng, ab, n):
        spec = BasisSpec.of(*ab)
        c = rng.standard_normal(n)
        e = Expansion(spec, c)
        back = analyze_full(spec, lambda x: synthesize(e, x), n)
        np.testing.assert_allclose(back.coeffs, c, atol=1e-10)

    @pytest.mark.parametrize("ab", [(0.0, 0.0), (0.3, 1.7), (1.3, 0.2)])
    def test_general_params(self, rng, ab):
        spec = BasisSpec.of(*ab)
        c = rng.standard_normal(48)
        e = Expansion(spec, c)
        back = analyze_full(spec, lambda x: synthesize(e, x), 48)
        np.testing.assert_allclose(back.coeffs, c, atol=1e-10)

    def test_top_coefficient_of_u_kind(self, cheb_u):
        # 只有最高次项：最容易被混叠的情形
        e = Expansion(cheb_u, np.eye(16)[15])
        back = analyze_full(cheb_u, lambda x: synthesize(e, x), 16)
        np.testing.assert_allclose(back.coeffs, np.eye(16)[15], atol=1e-12)

    @pytest.mark.parametrize("alpha", [-0.5, 0.0, 0.5, 1.7])
    @pytest.mark.parametrize("n", [8, 64])
    def test_half_mode(self, rng, alpha, n):
        spec = BasisSpec.of(alpha, alpha, HALF)
        c = rng.standard_normal(n)
        e = Expansion(spec, c)
        back = analyze_half(spec, lambda x: synthesize(e, x), n)
        np.testing.assert_allclose(back.coeffs, c, atol=1e-10)


class TestFastMatchesGauss:
    @pytest.mark.parametrize("ab", CHEBYSHEV)
    def test_random_polynomials_small_n(self, rng, ab):
        params = JacobiParams(*ab)
        for _ in range(5):
            p = np.polynomial.Polynomial(rng.standard_normal(8))
            fast = jacobi_coefficients(params, p, 8, fast=True)
            slow = jacobi_coefficients(params, p, 8, fast=False)
            np.testing.assert_allclose(fast, slow, atol=1e-10)

    @pytest.mark.parametrize("ab", CHEBYSHEV)
    @pytest.mark.parametrize("n", [64, 256, 1024])
    def test_random_smooth_functions(self, rng, ab, n):
        params = JacobiParams(*ab)
        fast_grid = full_grid(params, n, fast=True)
        slow_grid = full_grid(params, n, fast=False)
        for a, b in rng.uniform(-3.0, 3.0, size=(5, 2)):
            fast = jacobi_transform(fast_grid, np.exp(a * fast_grid.t) * np.cos(b * fast_grid.t))
            slow = jacobi_transform(slow_grid, np.exp(a * slow_grid.t) * np.cos(b * slow_grid.t))
            np.testing.assert_allclose(fast, slow, atol=1e-10)

    def test_kernel_cost_grows_like_n_log_n(self, rng):
        def best_time(n):
            data = rng.standard_normal(n)
            times = []
            for _ in range(7):
                start = time.perf_counter()
                dct("DCT-II", data)
                times.append(time.perf_counter() - start)
            return min(times)

        small, large = 2 ** 10, 2 ** 16
        expected = (large * math.log(large)) / (small * math.log(small))
        # 小规模以调用开销为主，只检查上界
        assert best_time(large) / best_time(small) <= 2.0 * expected


class TestParseval:
    @pytest.mark.parametrize("ab", [(-0.5, -0.5), (0.5, -0.5), (0.3, 1.7)])
    def test_coefficient_energy_equals_integral(self, ab):
        spec = BasisSpec.of(*ab)
        f = lambda x: np.exp(-((x - 0.3) ** 2)) * (1.0 + 0.5 * np.sin(x))
        e = analyze_full(spec, f, 256)
        energy, _ = integrate.quad(lambda x: f(x) ** 2, -np.inf, np.inf, epsabs=1e-14, limit=200)
        assert float(np.sum(e.coeffs ** 2)) == pytest.approx(energy, abs=1e-9)

    def test_half_mode_energy(self):
        spec = BasisSpec.of(0.5, 0.5, HALF)
        f = lambda x: np.exp(-((x - 0.3) ** 2))
        e = analyze_half(spec, f, 256)
        assert float(np.sum(e.coeffs ** 2)) == pytest.approx(math.sqrt(math.pi / 2), abs=1e-9)


class TestSpectralDecay:
    def test_sech_in_chebyshev_t_basis(self, cheb_t):
        c = np.abs(analyze_full(cheb_t, sech, 2048).coeffs)
        np.testing.assert_allclose(c[1:66:2], 0.0, atol=1e-14)
        for m in range(0, 57, 2):
            assert c[m + 8] <= 0.9 * c[m]

    def test_sech_even_coefficients_closed_form(self, cheb_t):
        # ∫_0^π sin^{1/2}θ cos(2kθ) dθ = π (-1)^k Γ(3/2) / (sqrt(2) Γ(5/4+k) Γ(5/4-k))
        c = analyze_full(cheb_t, sech, 2 ** 16).coeffs
        for k in range(6):
            integral = math.pi * (-1) ** k * special.gamma(1.5) / (
                math.sqrt(2.0) * special.gamma(1.25 + k) * special.gamma(1.25 - k)
            )
            expected = math.sqrt(2.0 / math.pi) * integral / (math.sqrt(2.0) if k == 0 else 1.0)
            assert c[2 * k] == pytest.approx(expected, abs=1e-6)
