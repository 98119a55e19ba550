"""Splitting of the double zero eigenvalue under transverse perturbation.

The translational zero eigenvalue of the weighted linearization is
geometrically simple and algebraically double. A transverse wavenumber
eta breaks it into the conjugate pair

    lambda_pm(eta) = +- i sqrt(-lambda1^2) eta + lambda2 eta^2 + O(eta^3),

with coefficients assembled from the conserved functionals:

    lambda1^2 = -||psi||^2 / (dE/dc)            (negative: imaginary pair)
    2 lambda2 = dM/dc / (2 (dE/dc)^2)
                * [||psi||^2 dM/dc - 2 M dE/dc]  (negative bracket)

In the small-amplitude limit c -> 3k these behave like
lambda1^2 ~ -(4/3)(c - 3k) and 2 lambda2 ~ -8 sqrt(2k) / (3 sqrt(c - 3k)),
matching the exact resonance pair of the limiting transverse model

    Lambda_pm(Upsilon) = +- (2i/sqrt(3)) Upsilon
                         sqrt(1 +- (4i/sqrt(3)) sqrt(2k) Upsilon).
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

from .errors import ExistenceError
from .functionals import FunctionalReport, functionals_closed
from .profile import WaveParams

__all__ = [
    "PuiseuxCoefficients",
    "puiseux_coefficients",
    "puiseux_from_functionals",
    "resonance_pair_prediction",
    "kdv_limit_coefficients",
    "kp2_resonance",
]


@dataclass(frozen=True)
class PuiseuxCoefficients:
    """Leading splitting coefficients; lambda1 is stored squared (real).

    ``lambda1_sq`` < 0 and ``lambda2`` < 0 for every c > 3k. The explicit
    pair is only formed in :func:`resonance_pair_prediction`, which gives
    the + branch positive imaginary part.
    """

    params: WaveParams
    lambda1_sq: float
    lambda2: float
    constituents: dict

    def to_dict(self) -> dict:
        return {
            "k": self.params.k,
            "c": self.params.c,
            "lambda1_sq": self.lambda1_sq,
            "lambda2": self.lambda2,
            "constituents": dict(self.constituents),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PuiseuxCoefficients":
        return cls(WaveParams(d["k"], d["c"]), d["lambda1_sq"], d["lambda2"],
                   dict(d["constituents"]))


def puiseux_from_functionals(report: FunctionalReport) -> PuiseuxCoefficients:
    """Assemble the splitting coefficients from any functional report."""
    m, n2 = report.mass, report.norm2
    dm, de = report.dmass_dc, report.denergy_dc
    lambda1_sq = -n2 / de
    lambda2 = dm / (4 * de**2) * (n2 * dm - 2 * m * de)
    return PuiseuxCoefficients(
        report.params, float(lambda1_sq), float(lambda2),
        {"mass": m, "dmass_dc": dm, "denergy_dc": de, "norm2": n2},
    )


def puiseux_coefficients(params: WaveParams) -> PuiseuxCoefficients:
    """Splitting coefficients from the closed-form functionals."""
    if params.c <= 3 * params.k:
        raise ExistenceError("splitting coefficients need c > 3k")
    return puiseux_from_functionals(functionals_closed(params))


def resonance_pair_prediction(coeffs: PuiseuxCoefficients, eta: float):
    """Predicted eigenvalue pair at transverse wavenumber eta.

    Returns (lambda_plus, lambda_minus) with Im(lambda_plus) >= 0; the
    two are complex conjugates with common real part lambda2 * eta^2 < 0
    for eta != 0. The expansion is asymptotic in eta; a warning flags
    |eta| beyond a tenth of the leading imaginary scale.
    """
    s = math.sqrt(-coeffs.lambda1_sq)
    if abs(eta) > 0.1 * s:
        warnings.warn(
            f"|eta|={abs(eta):g} beyond the heuristic validity scale "
            f"{0.1 * s:g} of the quadratic expansion",
            stacklevel=2,
        )
    lam = complex(coeffs.lambda2 * eta**2, s * abs(eta))
    return lam, lam.conjugate()


def kdv_limit_coefficients(k: float, c: float):
    """Leading c -> 3k asymptotics (lambda1_sq, lambda2).

    lambda1_sq ~ -(4/3)(c - 3k) and lambda2 ~ -4 sqrt(2k) / (3 sqrt(c - 3k)).
    """
    if c <= 3 * k:
        raise ExistenceError("asymptotics need c > 3k")
    return -4.0 * (c - 3 * k) / 3.0, -4.0 * math.sqrt(2 * k) / (3.0 * math.sqrt(c - 3 * k))


def kp2_resonance(k: float, upsilon: float):
    """Exact resonance pair of the limiting transverse model.

    Lambda_pm = +- (2i/sqrt(3)) Upsilon sqrt(1 +- (4i/sqrt(3)) sqrt(2k) Upsilon)
    with the principal square root, so Re Lambda_pm < 0 for Upsilon != 0
    and the small-Upsilon expansion is
    +- (2i/sqrt(3)) Upsilon - (4/3) sqrt(2k) Upsilon^2 + O(Upsilon^3).

    Returns (Lambda_plus, Lambda_minus) ordered by descending imaginary
    part for Upsilon > 0.
    """
    r3 = math.sqrt(3.0)
    base = 2j / r3 * upsilon
    inner = 4j / r3 * math.sqrt(2 * k) * upsilon
    plus = base * cmath.sqrt(1 + inner)
    minus = -base * cmath.sqrt(1 - inner)
    return plus, minus
