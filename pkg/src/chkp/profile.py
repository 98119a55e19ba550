"""Smooth solitary waves of the Camassa-Holm equation on a constant background.

The traveling profile phi(x) = k + psi(x) with speed c > 3k solves

    psi'' = k + psi - k (c - k)^2 / (c - k - psi)^2,

with the first integral

    (psi')^2 = psi^2 (c - 3k - psi) / (c - k - psi).

The wave is even, positive, peaks at psi(0) = c - 3k and decays like
exp(-nu0 |x|) with nu0 = sqrt((c - 3k)/(c - k)).

Construction integrates the second-order equation outward from the peak
(a regular initial point) and, once the orbit has dropped to half
amplitude, switches to the first integral as a first-order equation.
The switch matters: the tail rides the stable manifold of a saddle, so
integrating the second-order form all the way down amplifies round-off
along the unstable direction by exp(nu0 * x_max), while the first-order
form is contractive toward psi = 0.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import solve_ivp

from .emit import csv_text, json_dumps, write_text_atomic
from .errors import ConvergenceError, ExistenceError

__all__ = [
    "WaveParams",
    "Profile",
    "solve_profile",
    "flat_profile",
    "invariant_residuals",
    "kdv_profile",
    "kdv_residual",
]


@dataclass(frozen=True)
class WaveParams:
    """Background level k > 0 and wave speed c > 3k.

    Attributes
    ----------
    k : float
        Constant background of the full wave phi = k + psi.
    c : float
        Propagation speed; a solitary wave exists only for c > 3k.
    """

    k: float
    c: float

    def __post_init__(self):
        if not (math.isfinite(self.k) and math.isfinite(self.c)):
            raise ValueError("k and c must be finite")
        if self.k <= 0:
            raise ValueError(f"background level must be positive, got k={self.k}")
        if self.c <= 3 * self.k:
            raise ExistenceError(
                f"solitary wave requires c > 3k, got c={self.c}, 3k={3 * self.k}"
            )

    @property
    def amplitude(self) -> float:
        """Peak height of psi, equal to c - 3k."""
        return self.c - 3 * self.k

    @property
    def nu0(self) -> float:
        """Exponential decay rate sqrt((c - 3k)/(c - k)), in (0, 1)."""
        return math.sqrt((self.c - 3 * self.k) / (self.c - self.k))

    @property
    def epsilon(self) -> float:
        """Small-amplitude parameter sqrt(c - 3k)."""
        return math.sqrt(self.c - 3 * self.k)


def _psi_second_derivative(psi, k: float, c: float):
    """Right side of psi'' from the twice-integrated traveling wave equation."""
    return k + psi - k * (c - k) ** 2 / (c - k - psi) ** 2


def _psi_slope_on_orbit(psi, k: float, c: float):
    """psi' < 0 on x > 0 from the first integral; valid for 0 <= psi < c - 3k."""
    a = c - 3 * k
    return -psi * np.sqrt(np.maximum(a - psi, 0.0) / (c - k - psi))


class _Orbit:
    """Dense-output representation of psi on [0, x_max], extended by evenness.

    Region 1 ([0, x_sw], down to half amplitude) stores the second-order
    integration; region 2 stores the first-order tail integration. psi'
    comes from the integrator state in region 1 and from the first
    integral in region 2; psi'' is always the algebraic right side.
    """

    def __init__(self, k, c, x_max, sol_peak, sol_tail, x_sw):
        self.k = k
        self.c = c
        self.x_max = x_max
        self._sol_peak = sol_peak
        self._sol_tail = sol_tail
        self.x_sw = x_sw

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        xa = np.abs(x)
        psi = np.zeros_like(xa)
        dpsi = np.zeros_like(xa)
        near = xa <= self.x_sw
        far = ~near & (xa <= self.x_max)
        if np.any(near):
            vals = self._sol_peak.sol(xa[near])
            psi[near] = vals[0]
            dpsi[near] = vals[1]
        if np.any(far):
            p = self._sol_tail.sol(xa[far])[0]
            psi[far] = p
            dpsi[far] = _psi_slope_on_orbit(p, self.k, self.c)
        dpsi = np.where(x >= 0, dpsi, -dpsi)
        ddpsi = _psi_second_derivative(psi, self.k, self.c)
        return psi, dpsi, ddpsi


class _FlatOrbit:
    """psi identically zero (the constant background as a formal solution)."""

    def __init__(self, k, c, x_max):
        self.k = k
        self.c = c
        self.x_max = x_max

    def __call__(self, x):
        z = np.zeros_like(np.asarray(x, dtype=float))
        return z, z.copy(), z.copy()


def _integrate_orbit(k: float, c: float, x_max: float, rtol: float,
                     max_step: float) -> _Orbit:
    a = c - 3 * k

    def half_amplitude(x, y, *args):
        return y[0] - a / 2

    half_amplitude.terminal = True
    half_amplitude.direction = -1

    sol_peak = solve_ivp(
        lambda x, y: [y[1], _psi_second_derivative(y[0], k, c)],
        [0.0, x_max], [a, 0.0], method="DOP853",
        rtol=rtol, atol=1e-16 * a, dense_output=True,
        events=half_amplitude, max_step=max_step,
    )
    if not sol_peak.success:
        raise ConvergenceError(f"peak-region integration failed: {sol_peak.message}")

    if sol_peak.t_events[0].size:
        x_sw = float(sol_peak.t_events[0][0])
        psi_sw = float(sol_peak.y_events[0][0][0])
        sol_tail = solve_ivp(
            lambda x, y: [_psi_slope_on_orbit(y[0], k, c)],
            [x_sw, x_max], [psi_sw], method="DOP853",
            rtol=rtol, atol=0.0, dense_output=True, max_step=max_step,
        )
        if not sol_tail.success:
            raise ConvergenceError(f"tail integration failed: {sol_tail.message}")
    else:
        # Domain ends before the orbit reaches half amplitude.
        x_sw, sol_tail = x_max, None

    return _Orbit(k, c, x_max, sol_peak, sol_tail, x_sw)


@dataclass(frozen=True)
class Profile:
    """Sampled solitary wave on a symmetric uniform grid.

    Arrays are read-only; the profile is safe to share across workers.
    ``dcpsi`` and ``dcmu`` are speed derivatives of psi and of
    mu - k = psi - psi'' at fixed x, with the peak pinned at x = 0
    for every speed (centered differences in c).
    """

    params: WaveParams
    x: np.ndarray
    psi: np.ndarray
    dpsi: np.ndarray
    ddpsi: np.ndarray
    dcpsi: np.ndarray
    dcmu: np.ndarray
    x_max: float
    n_x: int
    residuals: tuple
    _orbit: object = field(repr=False, compare=False, default=None)
    _dc_orbits: tuple = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        for arr in (self.x, self.psi, self.dpsi, self.ddpsi, self.dcpsi, self.dcmu):
            arr.flags.writeable = False

    @property
    def peak_value(self) -> float:
        """psi at the peak x = 0; exactly c - 3k by construction."""
        return self.params.amplitude

    def evaluate(self, x):
        """Sample (psi, psi', psi'') at arbitrary points; zero beyond x_max."""
        if self._orbit is None:
            raise ValueError("profile carries no dense representation")
        return self._orbit(x)

    def evaluate_dc(self, x):
        """Sample the speed derivatives (dcpsi, dcmu) at arbitrary points."""
        if self._dc_orbits is None:
            x = np.asarray(x, dtype=float)
            return np.zeros_like(x), np.zeros_like(x)
        orbit_p, orbit_m, dc = self._dc_orbits
        psi_p, _, ddpsi_p = orbit_p(x)
        psi_m, _, ddpsi_m = orbit_m(x)
        dcpsi = (psi_p - psi_m) / (2 * dc)
        dcmu = ((psi_p - ddpsi_p) - (psi_m - ddpsi_m)) / (2 * dc)
        return dcpsi, dcmu

    def header(self) -> dict:
        r1, r2, r3 = self.residuals
        return {
            "k": self.params.k,
            "c": self.params.c,
            "nu0": self.params.nu0,
            "x_max": self.x_max,
            "n_x": self.n_x,
            "residuals": {"r1": r1, "r2": r2, "r3": r3},
        }

    def to_csv(self) -> str:
        cols = zip(self.x, self.psi, self.dpsi, self.ddpsi, self.dcpsi, self.dcmu)
        return csv_text(["x", "psi", "dpsi", "ddpsi", "dcpsi", "dcmu"], cols)

    def save(self, csv_path, header_path=None) -> None:
        """Write the sample table and a JSON header next to it."""
        write_text_atomic(csv_path, self.to_csv())
        if header_path is None:
            header_path = str(csv_path).rsplit(".", 1)[0] + ".json"
        write_text_atomic(header_path, json_dumps(self.header()))

    @staticmethod
    def header_from_json(text: str) -> dict:
        return json.loads(text)


def default_x_max(params: WaveParams) -> float:
    """Domain half-width putting the tail at about exp(-30) of the peak."""
    return max(40.0, 30.0 / params.nu0)


def solve_profile(params: WaveParams, x_max: float | None = None, n_x: int = 4096,
                  *, rtol: float = 1e-13, max_step: float = np.inf,
                  inv_tol: float = 1e-9, dc_rel: float = 1e-5) -> Profile:
    """Construct the solitary wave profile and its speed derivatives.

    Parameters
    ----------
    params : WaveParams
        Background and speed; requires c > 3k.
    x_max : float, optional
        Half-width of the symmetric grid. Default max(40, 30/nu0).
        A warning is issued when amplitude * exp(-nu0 x_max) >= 1e-12.
    n_x : int
        Number of uniform samples on [-x_max, x_max]; at least 256.
    rtol : float
        Relative tolerance of the adaptive integrator.
    max_step : float
        Step-size cap, mainly for convergence studies.
    inv_tol : float
        Acceptance threshold for the pointwise first-integral residual.
    dc_rel : float
        delta_c = dc_rel * (c - 3k) for the centered speed derivatives.

    Returns
    -------
    Profile

    Raises
    ------
    ExistenceError
        If c <= 3k (raised by the WaveParams constructor).
    ConvergenceError
        If the integrated profile violates ``inv_tol``.
    """
    if n_x < 256:
        raise ValueError(f"n_x must be at least 256, got {n_x}")
    k, c = params.k, params.c
    a = params.amplitude
    if x_max is None:
        x_max = default_x_max(params)
    if a * math.exp(-params.nu0 * x_max) >= 1e-12:
        warnings.warn(
            f"x_max={x_max} leaves a tail of {a * math.exp(-params.nu0 * x_max):.2e}; "
            "increase x_max for a cleanly truncated profile",
            stacklevel=2,
        )

    orbit = _integrate_orbit(k, c, x_max, rtol, max_step)
    dc = dc_rel * a
    orbit_p = _integrate_orbit(k, c + dc, x_max, rtol, max_step)
    orbit_m = _integrate_orbit(k, c - dc, x_max, rtol, max_step)

    x = np.linspace(-x_max, x_max, n_x)
    psi, dpsi, ddpsi = orbit(x)
    psi_p, _, ddpsi_p = orbit_p(x)
    psi_m, _, ddpsi_m = orbit_m(x)
    dcpsi = (psi_p - psi_m) / (2 * dc)
    dcmu = ((psi_p - ddpsi_p) - (psi_m - ddpsi_m)) / (2 * dc)

    prof = Profile(params, x, psi, dpsi, ddpsi, dcpsi, dcmu,
                   float(x_max), int(n_x), (0.0, 0.0, 0.0), orbit,
                   (orbit_p, orbit_m, dc))
    res = invariant_residuals(prof)
    if max(res) > inv_tol:
        raise ConvergenceError(
            f"profile residuals {res} exceed inv_tol={inv_tol}; "
            "tighten rtol or reduce x_max"
        )
    return replace(prof, residuals=res)


def flat_profile(params: WaveParams, x_max: float | None = None,
                 n_x: int = 4096) -> Profile:
    """Zero-amplitude profile psi = 0 (constant background as formal solution).

    Useful as the exactly constant-coefficient input of discretized
    operators; every traveling wave residual vanishes identically.
    """
    if x_max is None:
        x_max = default_x_max(params)
    x = np.linspace(-x_max, x_max, n_x)
    z = np.zeros_like(x)
    return Profile(params, x, z, z.copy(), z.copy(), z.copy(), z.copy(),
                   float(x_max), int(n_x), (0.0, 0.0, 0.0),
                   _FlatOrbit(params.k, params.c, x_max))


def invariant_residuals(profile: Profile) -> tuple:
    """Max pointwise residuals of the three traveling wave identities.

    Returns
    -------
    (r1, r2, r3) : tuple of float
        r1: once-integrated second-order form,
        r2: twice-integrated form with the (c - phi)^2 factor,
        r3: first integral linking psi' to psi.
        All evaluated from the stored samples and derivatives.
    """
    k, c = profile.params.k, profile.params.c
    phi = k + profile.psi
    dphi = profile.dpsi
    ddphi = profile.ddpsi
    r1 = np.max(np.abs(
        (c - phi) * (phi - ddphi) + 0.5 * dphi**2 - 0.5 * phi**2
        - (k * c - 1.5 * k**2)
    ))
    r2 = np.max(np.abs(-(c - phi) ** 2 * (ddphi - phi) - k * (c - k) ** 2))
    r3 = np.max(np.abs(
        dphi**2 - profile.psi**2 * (c - 3 * k - profile.psi)
        / (c - k - profile.psi)
    ))
    return float(r1), float(r2), float(r3)


def kdv_profile(k: float, X):
    """Leading-order small-amplitude shape sech^2(X / (2 sqrt(2k)))."""
    if k <= 0:
        raise ValueError("k must be positive")
    return 1.0 / np.cosh(np.asarray(X, dtype=float) / (2 * math.sqrt(2 * k))) ** 2


def _second_derivative_uniform(values: np.ndarray, h: float) -> np.ndarray:
    """Order-6 centered second derivative on a uniform grid (interior only)."""
    w = np.array([1 / 90, -3 / 20, 3 / 2, -49 / 18, 3 / 2, -3 / 20, 1 / 90]) / h**2
    return np.convolve(values, w[::-1], mode="valid")


def kdv_residual(k: float, eps: float, X, psi_tilde, ddpsi_tilde=None) -> float:
    """Sup-norm residual of the rescaled profile equation.

    Evaluates F(Psi, eps^2) = -Psi'' + Psi (k(2 - 3 Psi) + eps^2 (1 - Psi)^2)
    / (2k + eps^2 (1 - Psi))^2 on the grid X, where Psi(X) = psi(X/eps)/eps^2
    is the rescaled profile. If second-derivative samples are not supplied
    they are formed by an order-6 finite difference, which needs a uniform
    grid and limits the attainable floor to O(h^6).
    """
    X = np.asarray(X, dtype=float)
    psi_tilde = np.asarray(psi_tilde, dtype=float)
    if ddpsi_tilde is None:
        h = X[1] - X[0]
        if not np.allclose(np.diff(X), h, rtol=1e-10):
            raise ValueError("finite-difference fallback needs a uniform grid")
        dd = _second_derivative_uniform(psi_tilde, h)
        p = psi_tilde[3:-3]
    else:
        dd = np.asarray(ddpsi_tilde, dtype=float)
        p = psi_tilde
    num = p * (k * (2 - 3 * p) + eps**2 * (1 - p) ** 2)
    den = (2 * k + eps**2 * (1 - p)) ** 2
    return float(np.max(np.abs(-dd + num / den)))
