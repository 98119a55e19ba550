"""Conserved functionals of the one-dimensional wave and their closed forms.

For the solitary wave psi with xi0 = sqrt((c - 3k) / (2k)):

    M(psi)        = 4k [xi0 sqrt(1 + xi0^2) + arcsinh xi0]
    dM/dc         = 2 sqrt((c - k)/(c - 3k))
    E(psi)        = (1/2) int (psi'^2 + psi^2) dx
                  = (c - 2k) sqrt((c - 3k)(c - k)) - k^2 arccosh((c - 2k)/k)
    dE/dc         = 2 sqrt((c - 3k)(c - k))
    ||psi||^2     = 2k (2c - 5k) [xi0 sqrt(1 + xi0^2) + arcsinh xi0]
                    - 4k^2 xi0 sqrt((1 + xi0^2)^3)

The closed form for E follows from integrating dE/dc down from c = 3k,
where every functional vanishes with the amplitude. All quadrature
counterparts use the composite trapezoid rule, which is spectrally
accurate for these analytic, exponentially decaying integrands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ExistenceError
from .profile import Profile, WaveParams

__all__ = [
    "FunctionalReport",
    "mass_closed",
    "mass_derivative_closed",
    "energy_closed",
    "energy_derivative_closed",
    "norm2_closed",
    "functionals_closed",
    "functionals_quadrature",
    "euler_lagrange_residual",
    "fredholm_pairing",
    "antiderivative_from_right",
]


@dataclass(frozen=True)
class FunctionalReport:
    """Mass, energy, squared norm and the two speed derivatives."""

    params: WaveParams
    mass: float
    energy: float
    norm2: float
    dmass_dc: float
    denergy_dc: float
    method: str  # "closed_form" or "quadrature"

    def to_dict(self) -> dict:
        return {
            "k": self.params.k,
            "c": self.params.c,
            "mass": self.mass,
            "energy": self.energy,
            "norm2": self.norm2,
            "dmass_dc": self.dmass_dc,
            "denergy_dc": self.denergy_dc,
            "method": self.method,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FunctionalReport":
        return cls(WaveParams(d["k"], d["c"]), d["mass"], d["energy"],
                   d["norm2"], d["dmass_dc"], d["denergy_dc"], d["method"])


def _check(params: WaveParams) -> None:
    # WaveParams already rejects c <= 3k; kept for raw (k, c) call sites.
    if params.c <= 3 * params.k:
        raise ExistenceError("functionals are defined only for c > 3k")


def _xi0(params: WaveParams) -> float:
    return math.sqrt((params.c - 3 * params.k) / (2 * params.k))


def mass_closed(params: WaveParams) -> float:
    """Excess mass integral of psi over the line."""
    _check(params)
    k = params.k
    x0 = _xi0(params)
    return 4 * k * (x0 * math.sqrt(1 + x0**2) + math.asinh(x0))


def mass_derivative_closed(params: WaveParams) -> float:
    """dM/dc = 2 sqrt((c - k)/(c - 3k)); positive, diverges as c -> 3k."""
    _check(params)
    return 2 * math.sqrt((params.c - params.k) / (params.c - 3 * params.k))


def energy_closed(params: WaveParams) -> float:
    """Quadratic energy (1/2) int (psi'^2 + psi^2) dx in closed form."""
    _check(params)
    k, c = params.k, params.c
    root = math.sqrt((c - 3 * k) * (c - k))
    return (c - 2 * k) * root - k**2 * math.acosh((c - 2 * k) / k)


def energy_derivative_closed(params: WaveParams) -> float:
    """dE/dc = 2 sqrt((c - 3k)(c - k)); positive, vanishes as c -> 3k."""
    _check(params)
    return 2 * math.sqrt((params.c - 3 * params.k) * (params.c - params.k))


def norm2_closed(params: WaveParams) -> float:
    """Squared L2 norm of psi."""
    _check(params)
    k, c = params.k, params.c
    x0 = _xi0(params)
    s = x0 * math.sqrt(1 + x0**2) + math.asinh(x0)
    return 2 * k * (2 * c - 5 * k) * s - 4 * k**2 * x0 * math.sqrt((1 + x0**2) ** 3)


def functionals_closed(params: WaveParams) -> FunctionalReport:
    return FunctionalReport(
        params,
        mass_closed(params),
        energy_closed(params),
        norm2_closed(params),
        mass_derivative_closed(params),
        energy_derivative_closed(params),
        "closed_form",
    )


def functionals_quadrature(profile: Profile) -> FunctionalReport:
    """Trapezoid evaluation of M, E, ||psi||^2 and the speed derivatives.

    The derivatives use the stored centered differences in c:
    dM/dc = int dcpsi dx and, after integrating by parts in the psi'
    term, dE/dc = int (psi - psi'') dcpsi dx.
    """
    x = profile.x
    psi, dpsi, ddpsi = profile.psi, profile.dpsi, profile.ddpsi
    mass = np.trapezoid(psi, x)
    energy = 0.5 * np.trapezoid(dpsi**2 + psi**2, x)
    norm2 = np.trapezoid(psi**2, x)
    dmass = np.trapezoid(profile.dcpsi, x)
    denergy = np.trapezoid((psi - ddpsi) * profile.dcpsi, x)
    return FunctionalReport(profile.params, float(mass), float(energy),
                            float(norm2), float(dmass), float(denergy),
                            "quadrature")


def euler_lagrange_residual(profile: Profile) -> float:
    """Sup-norm of the first variation of the augmented energy at phi.

    The critical-point identity reads
    -(3/2) phi^2 + (1/2) phi'^2 + phi phi'' + c phi - c phi'' - ck + (3/2) k^2 = 0;
    it vanishes for the solitary wave and for the constant state phi = k.
    """
    k, c = profile.params.k, profile.params.c
    phi = k + profile.psi
    dphi = profile.dpsi
    ddphi = profile.ddpsi
    val = (-1.5 * phi**2 + 0.5 * dphi**2 + phi * ddphi + c * phi - c * ddphi
           - c * k + 1.5 * k**2)
    return float(np.max(np.abs(val)))


def fredholm_pairing(profile: Profile) -> float:
    """Solvability pairing -<phi - k, dcmu>; equals -dE/dc for the wave.

    Strictly negative for every c > 3k, which is what rules out a third
    generalized kernel element of the linearization.
    """
    return float(-np.trapezoid(profile.psi * profile.dcmu, profile.x))


def antiderivative_from_right(values, x) -> np.ndarray:
    """Antiderivative vanishing at the right end: (Dx^{-1} f)(x) = int_{+inf}^x f.

    Cumulative trapezoid from the last grid point leftward; appropriate
    for integrands that decay to zero as x -> +inf.
    """
    values = np.asarray(values, dtype=float)
    x = np.asarray(x, dtype=float)
    seg = 0.5 * (values[1:] + values[:-1]) * np.diff(x)
    out = np.zeros_like(values)
    out[:-1] = -np.cumsum(seg[::-1])[::-1]
    return out
