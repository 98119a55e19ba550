import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.integrate import quad

from chkp import (
    ExistenceError,
    WaveParams,
    antiderivative_from_right,
    energy_closed,
    energy_derivative_closed,
    euler_lagrange_residual,
    flat_profile,
    fredholm_pairing,
    functionals_closed,
    functionals_quadrature,
    mass_closed,
    mass_derivative_closed,
    norm2_closed,
    solve_profile,
)

P14 = WaveParams(1.0, 4.0)
P135 = WaveParams(1.0, 3.5)

# values frozen from the closed forms at k=1, c=4 (cross-checked below
# against independent quadratures of the substituted integrals)
MASS_14 = 6.098017408987388
ENERGY_14 = 2.147143718212938
NORM2_14 = 3.9508736907744506


class TestClosedForms:
    def test_reference_values(self):
        assert_allclose(mass_closed(P14), MASS_14, rtol=1e-14)
        assert_allclose(energy_closed(P14), ENERGY_14, rtol=1e-14)
        assert_allclose(norm2_closed(P14), NORM2_14, rtol=1e-14)
        assert_allclose(mass_derivative_closed(P14), 2 * math.sqrt(3), rtol=1e-14)
        assert_allclose(energy_derivative_closed(P14), 2 * math.sqrt(3), rtol=1e-14)

    def test_rejects_subcritical(self):
        with pytest.raises(ExistenceError):
            WaveParams(1.0, 2.9)

    @pytest.mark.parametrize("func", [mass_closed, energy_closed, norm2_closed])
    def test_vanishes_at_small_amplitude(self, func):
        assert 0 < func(WaveParams(1.0, 3.0 + 1e-10)) < 1e-4

    def test_derivative_limits_near_existence_boundary(self):
        p = WaveParams(1.0, 3.0 + 1e-8)
        assert mass_derivative_closed(p) > 1e3
        assert energy_derivative_closed(p) < 1e-3

    def test_monotone_in_speed(self):
        grid = np.linspace(3.1, 8.0, 30)
        masses = [mass_closed(WaveParams(1.0, c)) for c in grid]
        energies = [energy_closed(WaveParams(1.0, c)) for c in grid]
        assert np.all(np.diff(masses) > 0)
        assert np.all(np.diff(energies) > 0)

    @pytest.mark.parametrize("params", [P14, P135, WaveParams(0.5, 2.0)])
    def test_against_substituted_integrals(self, params):
        # independent oracle: one-dimensional quadrature of the profile
        # integrals after substituting z = peak - psi
        k, a = params.k, params.amplitude
        m, _ = quad(lambda z: np.sqrt((2 * k + z) / z), 0, a, epsabs=1e-13)
        e, _ = quad(lambda z: (a - z) * (z + k) / np.sqrt(z * (z + 2 * k)),
                    0, a, epsabs=1e-13)
        n2, _ = quad(lambda z: np.sqrt(2 * k + z) * (a - z) / np.sqrt(z),
                     0, a, epsabs=1e-13)
        assert_allclose(mass_closed(params), 2 * m, rtol=1e-10)
        assert_allclose(energy_closed(params), 2 * e, rtol=1e-10)
        assert_allclose(norm2_closed(params), 2 * n2, rtol=1e-10)

    @pytest.mark.parametrize("params", [P14, P135])
    def test_derivatives_against_finite_differences(self, params):
        dc = 1e-5 * params.amplitude
        up = WaveParams(params.k, params.c + dc)
        dn = WaveParams(params.k, params.c - dc)
        fd_mass = (mass_closed(up) - mass_closed(dn)) / (2 * dc)
        fd_energy = (energy_closed(up) - energy_closed(dn)) / (2 * dc)
        assert_allclose(fd_mass, mass_derivative_closed(params), rtol=1e-6)
        assert_allclose(fd_energy, energy_derivative_closed(params), rtol=1e-6)


class TestQuadrature:
    def test_matches_closed_forms(self, prof_14):
        rq = functionals_quadrature(prof_14)
        rc = functionals_closed(P14)
        assert rq.method == "quadrature" and rc.method == "closed_form"
        assert_allclose(rq.mass, rc.mass, rtol=1e-8)
        assert_allclose(rq.energy, rc.energy, rtol=1e-8)
        assert_allclose(rq.norm2, rc.norm2, rtol=1e-8)
        assert_allclose(rq.dmass_dc, rc.dmass_dc, rtol=1e-8)
        assert_allclose(rq.denergy_dc, rc.denergy_dc, rtol=1e-8)

    def test_matches_closed_forms_second_speed(self, prof_135):
        rq = functionals_quadrature(prof_135)
        rc = functionals_closed(P135)
        for name in ("mass", "energy", "norm2"):
            assert_allclose(getattr(rq, name), getattr(rc, name), rtol=1e-8)

    def test_all_positive(self, prof_14):
        rq = functionals_quadrature(prof_14)
        assert min(rq.mass, rq.energy, rq.norm2, rq.dmass_dc, rq.denergy_dc) > 0

    def test_odd_integrand_integrates_to_zero(self, prof_14):
        val = np.trapezoid(prof_14.dpsi * prof_14.psi, prof_14.x)
        assert abs(val) <= 1e-12

    def test_report_round_trip(self, prof_14):
        from chkp import FunctionalReport

        rq = functionals_quadrature(prof_14)
        assert FunctionalReport.from_dict(rq.to_dict()) == rq


class TestEulerLagrange:
    def test_solitary_wave_is_critical_point(self, prof_14):
        assert euler_lagrange_residual(prof_14) <= 1e-8

    def test_constant_state_is_critical_point(self):
        flat = flat_profile(P14, n_x=512)
        assert euler_lagrange_residual(flat) == 0.0

    def test_detects_corrupted_second_derivative(self, prof_14):
        import dataclasses

        bad = dataclasses.replace(prof_14, ddpsi=prof_14.ddpsi * 1.01)
        assert euler_lagrange_residual(bad) >= 1e-3 * prof_14.params.amplitude


class TestFredholmPairing:
    def test_equals_minus_energy_derivative(self, prof_14):
        val = fredholm_pairing(prof_14)
        assert_allclose(val, -energy_derivative_closed(P14), rtol=1e-4)

    def test_strictly_negative(self, prof_135):
        assert fredholm_pairing(prof_135) < 0

    def test_bilinear_in_dcmu(self, prof_14):
        import dataclasses

        zeroed = dataclasses.replace(prof_14, dcmu=np.zeros_like(prof_14.dcmu))
        assert fredholm_pairing(zeroed) == 0.0

    def test_pairing_identity_via_antiderivative(self, prof_14):
        # <phi', Dx^{-1} dcmu> = -<psi, dcmu> by parts (boundary terms decay);
        # the cumulative trapezoid is O(h^2) pointwise, hence the tolerance
        x = prof_14.x
        lhs = np.trapezoid(prof_14.dpsi
                           * antiderivative_from_right(prof_14.dcmu, x), x)
        rhs = -np.trapezoid(prof_14.psi * prof_14.dcmu, x)
        assert_allclose(lhs, rhs, rtol=1e-4)


class TestAntiderivative:
    def test_recovers_decaying_primitive(self, prof_14):
        # Dx^{-1} psi' = psi for a function vanishing at +inf
        rec = antiderivative_from_right(prof_14.dpsi, prof_14.x)
        assert np.max(np.abs(rec - prof_14.psi)) < 1e-4

    def test_vanishes_at_right_end(self):
        x = np.linspace(-5, 5, 301)
        out = antiderivative_from_right(np.exp(-x**2), x)
        assert out[-1] == 0.0
        assert np.all(out[:-1] < 0)  # integral from +inf backwards
