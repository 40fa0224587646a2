import math

import numpy as np
import pytest
import scipy.integrate as si

from miw import coupling, wasser
from miw.coupling import (
    BiasTransform,
    a_coefficient,
    bias_density,
    coupled_gap_bound,
    coupling_wasserstein_bound,
    inverse_moment_gap,
    telescoped_gap_envelope,
)
from miw.errors import DomainError
from miw.radial import solve_ground_state
from miw.stein import TiltedGaussianTarget, r_infinity, stein_kernel


class TestACoefficient:
    def test_base_cases(self):
        for k in range(10):
            assert a_coefficient(0, k) == pytest.approx(1.0, rel=1e-14)
        assert a_coefficient(1, 2) == pytest.approx(2.0, rel=1e-14)
        assert a_coefficient(2, 4) == pytest.approx(8.0, rel=1e-13)
        assert a_coefficient(1, 1) == pytest.approx(1.0, rel=1e-13)

    def test_even_k_conventions_agree(self):
        # for even k both cutoffs (j > k/2 via gamma poles, j >= k as printed)
        # give zero on the overlap
        for k in (2, 4, 6, 8):
            for j in range(k, k + 4):
                assert a_coefficient(j, k) == 0.0
            for j in range(k // 2 + 1, k):
                assert a_coefficient(j, k) == 0.0

    def test_reproduces_even_kernels(self):
        # Σ_j a_j(k) x^{-2j} equals the Stein kernel exactly for even k
        for k in (2, 4, 6, 8):
            t = TiltedGaussianTarget(k)
            for x in np.linspace(0.5, 10.0, 40):
                series = sum(
                    a_coefficient(j, k) * x ** (-2.0 * j) for j in range(k // 2 + 1)
                )
                assert stein_kernel(t, float(x)) == pytest.approx(series, rel=1e-10)

    def test_domain(self):
        with pytest.raises(DomainError):
            a_coefficient(-1, 2)


class TestBiasDensity:
    def test_zero_outside_support(self, solve):
        bt = BiasTransform(solve(2, 20))
        x1 = bt.base.x1
        assert bias_density(bt, x1 + 0.5) == 0.0
        assert bias_density(bt, -x1) == 0.0  # support is the half-open (x_N, x_1]
        assert bias_density(bt, x1) > 0.0

    def test_interval_masses(self, solve):
        for k in (0, 1, 4):
            bt = BiasTransform(solve(k, 16))
            y = bt.ascending_points
            for j in range(len(y) - 1):
                mass, _ = si.quad(lambda x: bias_density(bt, x), y[j], y[j + 1], limit=200)
                assert mass == pytest.approx(1.0 / 15.0, abs=1e-12)

    def test_total_mass(self, solve):
        bt = BiasTransform(solve(3, 30))
        y = bt.ascending_points
        total = 0.0
        for j in range(len(y) - 1):
            piece, _ = si.quad(lambda x: bias_density(bt, x), y[j], y[j + 1], limit=200)
            total += piece
        assert total == pytest.approx(1.0, abs=1e-12)

    def test_k0_uniform_mixture(self, solve):
        # with unit Gaussian gaps 1/Σx, the k=0 transform is piecewise constant
        # with height Σ_{i≤n} x_i /(N-1) on each interval
        sol = solve(0, 12)
        bt = BiasTransform(sol)
        sums = sol.prefix_sums()
        for n in range(sol.n_points - 1):
            x_mid = 0.5 * (sol.points[n] + sol.points[n + 1])
            expected = sums[n] / (sol.n_points - 1)
            assert bias_density(bt, float(x_mid)) == pytest.approx(expected, rel=1e-10)


class TestCoupledGap:
    def test_two_point_hand_integral(self):
        # k=1, points ±1: p* = |y| on (-1,1]; E|F - F*| = 2∫_0^1 (1-v)v dv = 1/3
        bt = BiasTransform(solve_ground_state(1, 2))
        assert coupled_gap_bound(bt) == pytest.approx(1.0 / 3.0, rel=1e-12)

    def test_envelope_value(self, solve):
        for k, n in ((0, 20), (3, 40)):
            bt = BiasTransform(solve(k, n))
            assert telescoped_gap_envelope(bt) == pytest.approx(
                2.0 * bt.base.x1 / (n - 1), rel=1e-12
            )

    def test_exact_below_envelope(self, solve):
        for k in range(7):
            for n in (20, 80, 200):
                bt = BiasTransform(solve(k, n))
                assert coupled_gap_bound(bt) <= telescoped_gap_envelope(bt) + 1e-15


class TestInverseMoment:
    def test_degenerate_order(self, solve):
        img = inverse_moment_gap(BiasTransform(solve(2, 20)), 0)
        assert img.exact == img.envelope == 0.0

    def test_envelope_formula(self, solve):
        sol = solve(3, 40)
        img = inverse_moment_gap(BiasTransform(sol), 2)
        expected = (2.0 / 39.0) * (sol.median_point**-2 - sol.x1**-2)
        assert img.envelope == pytest.approx(expected, rel=1e-13)

    def test_outer_below_envelope(self, solve):
        for k, l in ((1, 1), (2, 2), (4, 3), (6, 2)):
            img = inverse_moment_gap(BiasTransform(solve(k, 60)), l)
            assert img.outer <= img.envelope + 1e-14
            assert img.exact == pytest.approx(img.central + img.outer, rel=1e-14)

    def test_order_above_tilt_rejected(self, solve):
        with pytest.raises(DomainError):
            inverse_moment_gap(BiasTransform(solve(2, 20)), 3)

    def test_rate_matches_scaling_law(self, solve):
        # exact value decays like N^{l/r_k - 1} with r_2 = 3/2 + 8/5
        from miw.rates import Correction, fit_rate

        pairs = []
        for n in range(50, 401, 50):
            img = inverse_moment_gap(BiasTransform(solve(2, n)), 1)
            pairs.append((n, img.exact))
        fit = fit_rate(pairs, Correction.NONE)
        expected = 1.0 / (1.5 + 8.0 / 5.0) - 1.0
        assert fit.exponent == pytest.approx(expected, abs=0.1)


class TestCouplingBound:
    def test_k1_chain_inequality(self, solve):
        for n in (50, 110):
            sol = solve(1, n)
            bt = BiasTransform(sol)
            bound = coupling_wasserstein_bound(bt)
            chain = (5.0 + 2.0 * sol.x1) * 2.0 * sol.x1 / (n - 1)
            assert bound <= chain

    def test_k1_log_rate_band(self, solve):
        vals = []
        ns = (50, 100, 200, 400)
        for n in ns:
            vals.append(coupling_wasserstein_bound(BiasTransform(solve(1, n))))
        ratios = [v / (math.log(n) / n) for v, n in zip(vals, ns)]
        assert max(ratios) / min(ratios) < 3.0

    def test_dominates_exact_distance(self, solve):
        for k in (1, 2, 3):
            t = TiltedGaussianTarget(k)
            for n in (20, 110):
                sol = solve(k, n)
                w1 = wasser.w1_empirical_vs_cdf(sol.points, t)
                assert w1 <= coupling_wasserstein_bound(BiasTransform(sol))

    def test_k2_corollary_improves_general_form(self, solve):
        # the Maxwell-specialized constants beat the general even-k expansion
        sol = solve(2, 110)
        bt = BiasTransform(sol)
        segs = bt.coupling_segments()
        specialized = coupling_wasserstein_bound(bt)
        general = (
            a_coefficient(1, 2)
            * (coupling._e_weighted_absdiff_pow(segs, 2, 0, 0) + 2 * coupling._e_weighted_gap(segs, 2))
            + a_coefficient(0, 2)
            * (
                coupling._e_weighted_absdiff_pow(segs, 2, 0, 2)
                + 2 * coupling._e_weighted_gap(segs, 2, pf=2)
            )
            + a_coefficient(1, 2)
            * (
                coupling._e_weighted_absdiff_pow(segs, 2, 0, -1)
                + coupling._e_weighted_gap(segs, 2, pf=-1)
            )
        )
        assert specialized < general

    def test_unsupported_tilt(self, solve):
        with pytest.raises(DomainError):
            coupling_wasserstein_bound(BiasTransform(solve(0, 20)))

    def test_warning_above_verified_range(self, solve):
        with pytest.warns(UserWarning):
            coupling_wasserstein_bound(BiasTransform(solve(8, 20)))


class TestKappaInvariants:
    def test_weighted_ratio_bound(self):
        # 2 R / (|x|^k τ²) <= 2^{(1-k)/2} / Γ((k+1)/2) on sampled grids
        for k in range(9):
            t = TiltedGaussianTarget(k)
            bound = 2.0 ** ((1.0 - k) / 2.0) / math.gamma((k + 1) / 2.0)
            xs = np.linspace(0.05, 6.0, 150)
            vals = 2.0 * r_infinity(t, xs) / (
                np.abs(xs) ** k * stein_kernel(t, xs) ** 2
            )
            assert np.max(vals) <= bound + 1e-9

    def test_psi1_style_bound_below_one(self):
        # 2R/τ² <= 1 everywhere sampled
        for k in range(9):
            t = TiltedGaussianTarget(k)
            xs = np.linspace(0.05, 8.0, 150)
            assert np.max(2.0 * r_infinity(t, xs) / stein_kernel(t, xs) ** 2) <= 1.0

    def test_odd_kernel_remainder_bound(self):
        # 0 <= ε_k(x) <= C_k x^{-(k+1)} for odd k.  The derivation's envelope
        # Γ(1/2, z) <= e^{-z} z^{-1/2} gives C_k = √2 for every k; the printed
        # coefficient 2^{(k+1)/2} Γ(1+k/2)/Γ(1/2) exceeds √2 from k = 3 on but
        # equals 1 < √2 at k = 1, where it demonstrably fails (ε_1(2) ≈ 0.298
        # > 0.25), so k = 1 is checked against the √2 envelope.
        for k in (1, 3, 5, 7):
            printed = 2.0 ** ((k + 1) / 2.0) * math.gamma(1 + k / 2.0) / math.gamma(0.5)
            cap_coeff = math.sqrt(2.0) if k == 1 else printed
            for x in np.linspace(0.3, 6.0, 40):
                z = 0.5 * x * x
                eps = (
                    math.sqrt(math.pi)
                    * math.exp(z)
                    * math.erfc(x / math.sqrt(2.0))
                    / x**k
                )
                assert 0.0 <= eps <= cap_coeff * x ** (-(k + 1)) + 1e-12

    def test_odd_kernel_expansion_with_remainder(self):
        # τ = Σ_{j<=⌊k/2⌋} a_j/x^{2j} + a_{⌈k/2⌉}/√2 · ε_k reproduces the kernel
        for k in (1, 3, 5):
            t = TiltedGaussianTarget(k)
            ell = (k + 1) // 2
            for x in np.linspace(0.4, 7.0, 25):
                z = 0.5 * x * x
                eps = (
                    math.sqrt(math.pi)
                    * math.exp(z)
                    * math.erfc(float(x) / math.sqrt(2.0))
                    / float(x) ** k
                )
                series = sum(
                    a_coefficient(j, k) * float(x) ** (-2 * j) for j in range(k // 2 + 1)
                )
                full = series + a_coefficient(ell, k) / math.sqrt(2.0) * eps
                assert stein_kernel(t, float(x)) == pytest.approx(full, rel=1e-10)
