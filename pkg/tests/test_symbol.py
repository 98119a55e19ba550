import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from chkp import (
    SingularArgument,
    WaveParams,
    WeightOutOfRange,
    continuous_spectrum_bound,
    figure1_curve,
    hf_beta0,
    hf_symbol_real,
    symbol_lambda,
    symbol_real_part,
)

P14 = WaveParams(1.0, 4.0)


def unweighted_symbol(params, xi):
    """Independent route: i xi (1 + xi^2)^{-1} (c - 3k + (c - k) xi^2)."""
    k, c = params.k, params.c
    return 1j * xi / (1 + xi**2) * (c - 3 * k + (c - k) * xi**2)


class TestSymbolValues:
    def test_unweighted_value_at_unit_wavenumber(self):
        assert symbol_lambda(P14, 0.0, 0.0, 1.0) == 2j

    def test_unweighted_curve_against_independent_formula(self):
        xi = np.linspace(-15, 15, 901)
        diff = symbol_lambda(P14, 0.0, 0.0, xi) - unweighted_symbol(P14, xi)
        assert np.max(np.abs(diff)) <= 1e-13

    def test_weighted_value_at_zero_wavenumber(self):
        # s = -nu: lambda = -nu (1 - 3 nu^2) / (1 - nu^2) at k=1, c=4
        val = symbol_lambda(P14, 0.1, 0.0, 0.0)
        assert_allclose(val, -0.1 * 0.97 / 0.99, rtol=1e-14)
        assert val.imag == 0.0

    def test_zero_mode_singularity(self):
        with pytest.raises(SingularArgument):
            symbol_lambda(P14, 0.0, 0.5, 0.0)

    def test_pole_guard(self):
        with pytest.raises(SingularArgument):
            symbol_lambda(P14, 1.0, 0.0, 0.0)


class TestRealPartDecomposition:
    def test_two_paths_agree(self):
        xi = np.linspace(-25, 25, 1501)
        direct = symbol_lambda(P14, 0.1, 0.01, xi).real
        explicit = symbol_real_part(P14, 0.1, 0.01, xi)
        assert np.max(np.abs(direct - explicit)) <= 1e-12

    def test_two_paths_agree_without_transverse_term(self):
        xi = np.linspace(-25, 25, 1501)
        direct = symbol_lambda(P14, 0.25, 0.0, xi).real
        explicit = symbol_real_part(P14, 0.25, 0.0, xi)
        assert np.max(np.abs(direct - explicit)) <= 1e-12

    def test_unweighted_symbol_is_purely_imaginary(self):
        xi = np.linspace(-10, 10, 401)
        assert np.max(np.abs(symbol_real_part(P14, 0.0, 0.0, xi))) == 0.0

    def test_strictly_negative_in_admissible_weight(self):
        xi = np.linspace(-20, 20, 4001)
        assert symbol_real_part(P14, 0.1, 0.01, xi).max() < 0


class TestSpectrumBound:
    def test_positive_at_reference_parameters(self):
        bound = continuous_spectrum_bound(P14, 0.1, 0.01)
        assert bound.b > 0
        assert bound.tail_limit == -0.1 * 3.0

    @pytest.mark.parametrize("eta", [0.0, 0.01, 0.1, 1.0])
    def test_positive_across_weight_ladder(self, eta):
        nu0 = P14.nu0
        for nu in np.linspace(0.1, 0.9, 5) * nu0:
            assert continuous_spectrum_bound(P14, nu, eta).b > 0

    def test_vanishes_as_weight_goes_to_zero(self):
        assert continuous_spectrum_bound(P14, 1e-6, 0.0).b < 1e-5

    def test_weight_near_upper_edge(self):
        # quartic positivity (c-k) nu^4 - 2 (c-2k) nu^2 + c - 3k > 0 at nu=0.5
        nu = 0.5
        assert nu < P14.nu0
        k, c = 1.0, 4.0
        assert (c - k) * nu**4 - 2 * (c - 2 * k) * nu**2 + c - 3 * k > 0
        assert continuous_spectrum_bound(P14, nu, 0.0).b > 0

    def test_rejects_weight_outside_range(self):
        with pytest.raises(WeightOutOfRange):
            continuous_spectrum_bound(P14, P14.nu0 * 1.01, 0.0)
        with pytest.raises(WeightOutOfRange):
            continuous_spectrum_bound(P14, 0.0, 0.0)

    def test_rejects_coarse_frequency_grid(self):
        with pytest.raises(ValueError):
            continuous_spectrum_bound(P14, 0.1, 0.0, n_xi=500)


class TestCurve:
    def test_reference_curve_in_left_half_plane(self):
        curve = figure1_curve(P14, 0.1, 0.01, 20.0, 4001)
        assert curve.max_real < 0
        assert curve.conjugate_symmetry_defect() <= 1e-12

    def test_transverse_term_drops_at_eta_zero(self):
        curve = figure1_curve(P14, 0.1, 0.0, 20.0, 2001)
        at_zero = curve.values[curve.xi.size // 2]
        assert np.isfinite(at_zero.real) and np.isfinite(at_zero.imag)
        assert curve.conjugate_symmetry_defect() <= 1e-12

    def test_csv_round_trip(self):
        curve = figure1_curve(P14, 0.1, 0.01, 5.0, 1001)
        lines = curve.to_csv().splitlines()
        assert lines[0] == "xi,re,im"
        xi, re, im = (np.array(col) for col in zip(
            *[[float(v) for v in line.split(",")] for line in lines[1:]]))
        assert np.array_equal(xi, curve.xi)
        assert np.array_equal(re, curve.values.real)
        assert np.array_equal(im, curve.values.imag)

    def test_svg_is_self_contained(self):
        svg = figure1_curve(P14, 0.1, 0.01, 5.0, 501).to_svg()
        assert svg.startswith("<svg")
        assert "polyline" in svg and "href" not in svg


class TestHighFrequencySymbol:
    def test_value_at_zero_frequency(self):
        k, eps, rho = 1.0, 0.1, 0.3
        expected = -rho * (1 + 2 * k * (-(rho**2) + eps**2 * rho**4)
                           / (1 - 2 * eps**2 * rho**2 + eps**4 * rho**4))
        assert_allclose(hf_symbol_real(k, eps, rho, 0.0, 0.0), expected,
                        rtol=1e-14)

    @pytest.mark.parametrize("eps", [0.05, 0.1])
    @pytest.mark.parametrize("upsilon", [0.0, 0.3, 2.0])
    def test_scaling_consistency_with_weighted_symbol(self, eps, upsilon):
        # eps^3 Lambda(Xi) equals lambda(xi) at xi = eps Xi, nu = eps rho,
        # eta = eps^2 Upsilon, c = 3k + eps^2: exact change of variables
        k, rho = 1.0, 0.3
        params = WaveParams(k, 3 * k + eps**2)
        Xi = np.linspace(-30, 30, 1201)
        lhs = eps**3 * hf_symbol_real(k, eps, rho, upsilon, Xi)
        rhs = symbol_real_part(params, eps * rho, eps**2 * upsilon, eps * Xi)
        assert np.max(np.abs(lhs - rhs)) <= 1e-12

    @pytest.mark.parametrize("eps", [0.05, 0.1, 0.2])
    def test_uniform_gap_bound(self, eps):
        k = 1.0
        rho = 0.5 / math.sqrt(2 * k)
        beta0 = hf_beta0(k, eps, rho)
        assert beta0 > 0
        Xi = np.linspace(-50, 50, 2001)
        worst = min(np.min(-hf_symbol_real(k, eps, rho, u, Xi))
                    for u in np.linspace(0.0, 10.0, 21))
        assert worst >= beta0

    def test_beta0_rejects_bad_weight(self):
        with pytest.raises(WeightOutOfRange):
            hf_beta0(1.0, 0.1, 1.0)
