"""Fourier symbols of the linearized flow in exponentially weighted spaces.

Conjugating the linearization about the constant background with the
weight exp(nu x) replaces every d/dx by d/dx - nu, so on the Fourier
side i xi becomes s = i xi - nu. The resulting continuous-spectrum curve
is

    lambda(xi) = s (1 - s^2)^{-1} [c - 3k - (c - k) s^2 + eta^2 s^{-2}],

a rational function of s with real coefficients, hence conjugate
symmetric in xi. For 0 < nu < nu0 = sqrt((c - 3k)/(c - k)) its real part
is strictly negative for every transverse wavenumber eta.

The high-frequency block rescales with eps = sqrt(c - 3k) as
xi = eps Xi, nu = eps rho, eta = eps^2 Upsilon, lambda = eps^3 Lambda,
an exact change of variables on the symbol level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .emit import csv_text, svg_curve, write_text_atomic
from .errors import SingularArgument, WeightOutOfRange
from .profile import WaveParams

__all__ = [
    "SymbolCurve",
    "BandBound",
    "symbol_lambda",
    "symbol_real_part",
    "continuous_spectrum_bound",
    "figure1_curve",
    "hf_symbol_real",
    "hf_beta0",
    "default_xi_max",
]


def _shifted(xi, nu: float):
    return 1j * np.asarray(xi, dtype=float) - nu


def symbol_lambda(params: WaveParams, nu: float, eta: float, xi):
    """Weighted symbol lambda(xi); scalar in, scalar out (arrays allowed).

    Raises
    ------
    SingularArgument
        At xi = 0, nu = 0 with eta != 0 (the inverse-square derivative
        has no bounded realization on the zero mode), or on the poles of
        (1 - s^2)^{-1} (only reachable for |nu| = 1, outside any
        admissible weight).
    """
    k, c = params.k, params.c
    s = _shifted(xi, nu)
    if eta != 0 and np.any(s == 0):
        raise SingularArgument("eta != 0 needs (xi, nu) != (0, 0)")
    if np.any(1 - s**2 == 0):
        raise SingularArgument("symbol pole: 1 - (i xi - nu)^2 = 0")
    bracket = c - 3 * k - (c - k) * s**2
    if eta != 0:
        bracket = bracket + eta**2 / s**2
    out = s / (1 - s**2) * bracket
    return out if np.ndim(xi) else complex(out)


def symbol_real_part(params: WaveParams, nu: float, eta: float, xi):
    """Re lambda(xi) through its explicit decomposition.

    Independent of the complex evaluation path:

        Re lambda = -nu (c - k) - 2 k nu (nu^2 + xi^2 - 1) / D
                    - eta^2 nu (1 - nu^2 + 3 xi^2) / ((xi^2 + nu^2) D),
        D = (1 - nu^2 + xi^2)^2 + 4 xi^2 nu^2.
    """
    k, c = params.k, params.c
    xi = np.asarray(xi, dtype=float)
    x2 = xi**2
    if eta != 0 and np.any(x2 + nu**2 == 0):
        raise SingularArgument("eta != 0 needs (xi, nu) != (0, 0)")
    d = (1 - nu**2 + x2) ** 2 + 4 * x2 * nu**2
    if np.any(d == 0):
        raise SingularArgument("symbol pole: 1 - (i xi - nu)^2 = 0")
    out = -nu * (c - k) - 2 * k * nu * (nu**2 + x2 - 1) / d
    if eta != 0:
        out = out - eta**2 * nu * (1 - nu**2 + 3 * x2) / ((x2 + nu**2) * d)
    return out if out.ndim else float(out)


def default_xi_max(params: WaveParams) -> float:
    return 20.0 * max(1.0, params.nu0)


@dataclass(frozen=True)
class BandBound:
    """Distance of the weighted continuous spectrum from the imaginary axis."""

    b: float
    xi_at_max: float
    tail_limit: float  # Re lambda as |xi| -> inf, equals -nu (c - k)


def continuous_spectrum_bound(params: WaveParams, nu: float, eta: float,
                              xi_max: float | None = None,
                              n_xi: int = 4001) -> BandBound:
    """b = -sup_xi Re lambda(xi) over a dense grid, with the tail limit.

    The real part tends to -nu (c - k) as |xi| grows, so comparing the
    grid maximum against the analytic tail value confirms the supremum
    was not lost to truncation.

    Raises
    ------
    WeightOutOfRange
        If nu is not inside (0, nu0).
    """
    if not 0 < nu < params.nu0:
        raise WeightOutOfRange(
            f"weight nu={nu} outside (0, nu0={params.nu0:.6g})"
        )
    if n_xi < 1024:
        raise ValueError(f"n_xi must be at least 1024, got {n_xi}")
    if xi_max is None:
        xi_max = default_xi_max(params)
    xi = np.linspace(-xi_max, xi_max, n_xi)
    re = symbol_real_part(params, nu, eta, xi)
    tail = -nu * (params.c - params.k)
    i = int(np.argmax(re))
    re_max = max(float(re[i]), tail)
    return BandBound(-re_max, float(xi[i]), tail)


@dataclass(frozen=True)
class SymbolCurve:
    """Sampled curve lambda(xi) in the complex plane."""

    params: WaveParams
    nu: float
    eta: float
    xi: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.xi.flags.writeable = False
        self.values.flags.writeable = False

    @property
    def max_real(self) -> float:
        return float(self.values.real.max())

    def conjugate_symmetry_defect(self) -> float:
        """max |lambda(-xi) - conj(lambda(xi))| over the (symmetric) grid."""
        return float(np.max(np.abs(self.values[::-1] - np.conj(self.values))))

    def to_csv(self) -> str:
        rows = zip(self.xi, self.values.real, self.values.imag)
        return csv_text(["xi", "re", "im"], rows)

    def to_svg(self) -> str:
        p = self.params
        title = (f"lambda(xi), k={p.k:g}, c={p.c:g}, "
                 f"eta={self.eta:g}, nu={self.nu:g}")
        return svg_curve(self.values.real, self.values.imag, title=title,
                         xlabel="Re lambda", ylabel="Im lambda")

    def save(self, path, fmt: str = "csv") -> None:
        write_text_atomic(path, self.to_csv() if fmt == "csv" else self.to_svg())


def figure1_curve(params: WaveParams, nu: float, eta: float,
                  xi_max: float = 20.0, n_xi: int = 4001) -> SymbolCurve:
    """Sample lambda(xi) on a symmetric grid for emission or plotting."""
    xi = np.linspace(-xi_max, xi_max, n_xi)
    return SymbolCurve(params, nu, eta, xi, symbol_lambda(params, nu, eta, xi))


def hf_symbol_real(k: float, eps: float, rho: float, upsilon: float, Xi):
    """Re Lambda(Xi) of the rescaled high-frequency symbol, explicit form.

        Re Lambda = -rho [1 + 2k (3 Xi^2 - rho^2 + eps^2 (Xi^2 + rho^2)^2) / d
                          + Upsilon^2 (1 + 3 eps^2 Xi^2 - eps^2 rho^2)
                            / ((Xi^2 + rho^2) d)],
        d = 1 + 2 eps^2 (Xi^2 - rho^2) + eps^4 (Xi^2 + rho^2)^2.

    Agrees with eps^{-3} Re lambda at xi = eps Xi, nu = eps rho,
    eta = eps^2 Upsilon, c = 3k + eps^2 to round-off.
    """
    Xi = np.asarray(Xi, dtype=float)
    X2 = Xi**2
    if upsilon != 0 and np.any(X2 + rho**2 == 0):
        raise SingularArgument("upsilon != 0 needs (Xi, rho) != (0, 0)")
    d = 1 + 2 * eps**2 * (X2 - rho**2) + eps**4 * (X2 + rho**2) ** 2
    out = 1 + 2 * k * (3 * X2 - rho**2 + eps**2 * (X2 + rho**2) ** 2) / d
    if upsilon != 0:
        out = out + upsilon**2 * (1 + 3 * eps**2 * X2 - eps**2 * rho**2) \
            / ((X2 + rho**2) * d)
    out = -rho * out
    return out if out.ndim else float(out)


def hf_beta0(k: float, eps: float, rho: float) -> float:
    """Uniform spectral gap beta0 = rho [1 - 2k rho^2 - 2k eps^2 rho^4 / (1 - 2 eps^2 rho^2)].

    Valid lower bound for -Re Lambda over all (Xi, Upsilon) when
    0 < rho < 1/sqrt(2k) and eps is small enough that beta0 > 0.
    """
    rho0 = 1.0 / math.sqrt(2 * k)
    if not 0 < rho < rho0:
        raise WeightOutOfRange(f"rho={rho} outside (0, {rho0:.6g})")
    if 1 - 2 * eps**2 * rho**2 <= 0:
        raise WeightOutOfRange("eps too large: 1 - 2 eps^2 rho^2 <= 0")
    return rho * (1 - 2 * k * rho**2
                  - 2 * k * eps**2 * rho**4 / (1 - 2 * eps**2 * rho**2))
