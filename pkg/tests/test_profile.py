import dataclasses
import json
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from chkp import (
    ConvergenceError,
    ExistenceError,
    WaveParams,
    flat_profile,
    invariant_residuals,
    kdv_profile,
    kdv_residual,
    solve_profile,
)


class TestWaveParams:
    def test_rejects_speed_at_existence_boundary(self):
        with pytest.raises(ExistenceError):
            WaveParams(1.0, 3.0)

    def test_rejects_subcritical_speed(self):
        with pytest.raises(ExistenceError):
            WaveParams(1.0, 2.5)

    def test_rejects_nonpositive_background(self):
        with pytest.raises(ValueError):
            WaveParams(0.0, 4.0)
        with pytest.raises(ValueError):
            WaveParams(-1.0, 4.0)

    def test_derived_quantities(self):
        p = WaveParams(1.0, 4.0)
        assert p.amplitude == 1.0
        assert_allclose(p.nu0, math.sqrt(1.0 / 3.0), rtol=1e-15)
        assert p.epsilon == 1.0
        assert 0 < p.nu0 < 1


class TestSolve:
    def test_peak_value_exact(self):
        with pytest.warns(UserWarning):  # x_max=40 leaves a 1e-10 tail
            prof = solve_profile(WaveParams(1.0, 4.0), x_max=40.0, n_x=4096)
        assert prof.peak_value == 1.0
        psi0 = prof.evaluate(np.array([0.0]))[0][0]
        assert psi0 == 1.0

    def test_shape_invariants(self, prof_14):
        a = prof_14.params.amplitude
        assert np.all(prof_14.psi > 0)
        assert np.max(np.abs(prof_14.psi - prof_14.psi[::-1])) <= 1e-12 * a
        assert np.max(prof_14.psi) <= a
        # monotone decreasing on x > 0
        right = prof_14.psi[prof_14.x > 0]
        assert np.all(np.diff(right) < 0)
        # centered grid: peak among the middle samples
        assert abs(int(np.argmax(prof_14.psi)) - prof_14.n_x // 2) <= 1

    def test_tail_below_tolerance(self, prof_14):
        a = prof_14.params.amplitude
        assert prof_14.psi[0] < 1e-12 * a
        assert prof_14.psi[-1] < 1e-12 * a

    def test_tail_decay_rate(self, prof_14):
        x, psi = prof_14.x, prof_14.psi
        sel = x > 0.75 * prof_14.x_max
        slope = np.polyfit(x[sel], np.log(psi[sel]), 1)[0]
        nu0 = prof_14.params.nu0
        assert abs(slope + nu0) / nu0 < 0.02

    def test_rejects_coarse_grid(self):
        with pytest.raises(ValueError):
            solve_profile(WaveParams(1.0, 4.0), n_x=100)

    def test_derivatives_consistent_with_samples(self, prof_14):
        # stored dpsi should match a centered difference of psi to O(h^2)
        x, psi, dpsi = prof_14.x, prof_14.psi, prof_14.dpsi
        h = x[1] - x[0]
        fd = (psi[2:] - psi[:-2]) / (2 * h)
        assert np.max(np.abs(fd - dpsi[1:-1])) < 1e-3

    def test_speed_derivative_is_even_and_peaked(self, prof_14):
        assert np.max(np.abs(prof_14.dcpsi - prof_14.dcpsi[::-1])) < 1e-7
        assert prof_14.dcpsi[prof_14.n_x // 2] > 0


class TestResiduals:
    def test_converged_profile(self, prof_14):
        r1, r2, r3 = invariant_residuals(prof_14)
        assert max(r1, r2, r3) <= 1e-9

    def test_second_reference_speed(self, prof_135):
        assert max(invariant_residuals(prof_135)) <= 1e-9

    def test_zero_profile_solves_all_three_forms(self):
        flat = flat_profile(WaveParams(1.0, 4.0), n_x=512)
        assert invariant_residuals(flat) == (0.0, 0.0, 0.0)

    def test_residual_detects_corruption(self, prof_14):
        psi = prof_14.psi.copy()
        psi[int(np.argmax(psi))] += 1e-3
        bad = dataclasses.replace(prof_14, psi=psi)
        assert invariant_residuals(bad)[2] >= 1e-4

    def test_convergence_error_when_tolerance_unreachable(self):
        with pytest.raises(ConvergenceError):
            solve_profile(WaveParams(1.0, 4.0), rtol=1e-5, max_step=2.0,
                          inv_tol=1e-12)

    def test_step_halving_reduces_residual(self):
        # step-size cap binding (loose rtol): order-8 stepping should gain
        # far more than 4x per halving
        p = WaveParams(1.0, 4.0)
        r_coarse = invariant_residuals(
            solve_profile(p, rtol=1e-2, max_step=1.0, inv_tol=np.inf))[2]
        r_fine = invariant_residuals(
            solve_profile(p, rtol=1e-2, max_step=0.5, inv_tol=np.inf))[2]
        assert r_coarse / r_fine >= 4.0


class TestSerialization:
    def test_csv_and_header(self, tmp_path, prof_14):
        csv_path = tmp_path / "wave.csv"
        prof_14.save(csv_path)
        lines = csv_path.read_text().splitlines()
        assert lines[0] == "x,psi,dpsi,ddpsi,dcpsi,dcmu"
        assert len(lines) == prof_14.n_x + 1
        header = json.loads((tmp_path / "wave.json").read_text())
        assert header["k"] == 1.0 and header["c"] == 4.0
        assert header["n_x"] == prof_14.n_x
        assert header["residuals"]["r3"] <= 1e-9
        # floats round-trip exactly
        first = lines[1].split(",")
        assert float(first[0]) == prof_14.x[0]
        assert float(first[1]) == prof_14.psi[0]

    def test_arrays_are_read_only(self, prof_14):
        with pytest.raises(ValueError):
            prof_14.psi[0] = 1.0


class TestKdvShape:
    def test_peak_is_one(self):
        assert kdv_profile(1.0, 0.0) == 1.0

    def test_decay_and_monotone(self):
        X = np.linspace(0, 30, 200)
        v = kdv_profile(1.0, X)
        assert np.all(np.diff(v) < 0)
        assert v[-1] < 1e-8

    def test_half_height_point(self):
        # sech^2(X / (2 sqrt(2k))) = 1/2  at  X = 2 sqrt(2k) arccosh(sqrt(2))
        k = 2.0
        X_half = 2 * math.sqrt(2 * k) * math.acosh(math.sqrt(2.0))
        assert_allclose(kdv_profile(k, X_half), 0.5, rtol=1e-14)


class TestKdvResidual:
    def test_leading_order_shape_is_exact_solution(self):
        X = np.arange(-30.0, 30.0 + 1e-9, 0.02)
        res = kdv_residual(1.0, 0.0, X, kdv_profile(1.0, X))
        assert res <= 1e-10

    def test_zero_function(self):
        X = np.linspace(-10, 10, 501)
        assert kdv_residual(1.0, 0.1, X, np.zeros_like(X)) == 0.0

    def test_rescaled_profile(self, small_amplitude_profiles):
        eps = 0.1
        prof = small_amplitude_profiles[eps]
        X = np.linspace(-20, 20, 2001)
        psi, _, ddpsi = prof.evaluate(X / eps)
        res = kdv_residual(1.0, eps, X, psi / eps**2, ddpsi / eps**4)
        assert res <= 1e-8


class TestSmallAmplitudeLimit:
    def test_sup_error_scales_like_eps4(self, small_amplitude_profiles):
        errs = []
        eps_values = sorted(small_amplitude_profiles)
        for eps in eps_values:
            prof = small_amplitude_profiles[eps]
            kdv = eps**2 * kdv_profile(1.0, eps * prof.x)
            errs.append(np.max(np.abs(prof.psi - kdv)))
        errs = np.asarray(errs)
        # bounded constant in sup|psi - eps^2 shape| <= C eps^4
        assert np.all(errs / np.asarray(eps_values) ** 4 < 0.1)
        slope = np.polyfit(np.log(eps_values), np.log(errs), 1)[0]
        assert 3.7 <= slope <= 4.3
