"""Fourier collocation of the weighted linearized operator on a periodic box.

The operator exp(nu x) J (L + eta^2 Dx^{-2}) exp(-nu x) with
J = Dx (1 - Dx^2)^{-1} and L = c - 3 phi + phi'' - Dx (c - phi) Dx is
discretized on n_modes equispaced points of [-l/2, l/2). The weight is
applied by exact conjugation of every derivative symbol, i k -> i k - nu,
never by multiplying samples with exp(nu x), so periodicity survives and
the only truncation error is the profile tail at the domain edge.

Assembly splits the operator into its constant-coefficient part, applied
as one Fourier multiplier carrying the full symbol lambda0(k_j), plus the
psi-dependent remainder

    L - L0 = (-3 psi + psi'') + Dx psi Dx,

whose coefficient matrices act pointwise in physical space. On an even
grid the unpaired Nyquist mode gets the real part of each multiplier
(the grid cannot represent its imaginary part), which keeps every
physical-space matrix real; with psi = 0 the eigenvalues then equal the
symbol on the wavenumber grid exactly, Nyquist included.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgError, eigvals, lu_factor, lu_solve

from .emit import csv_text
from .errors import (
    ClusterAmbiguity,
    DomainTooSmall,
    EigensolverFailure,
    MatchFailure,
    SingularMode,
    WeightOutOfRange,
)
from .profile import Profile, WaveParams
from .puiseux import PuiseuxCoefficients, puiseux_coefficients, resonance_pair_prediction

__all__ = [
    "Discretization",
    "SpectrumReport",
    "ResonanceTrack",
    "TrackPoint",
    "build_operator",
    "build_weighted_L",
    "constant_symbol_on_grid",
    "full_spectrum",
    "double_zero_check",
    "kernel_residuals",
    "track_resonances",
]

CLUSTER_RTOL = 1e-6        # |lambda| <= CLUSTER_RTOL * max|lambda| is "zero"
CLUSTER_SEPARATION = 100.0  # demanded gap factor between cluster and rest


@dataclass(frozen=True)
class Discretization:
    """Geometry and validity checks for one collocation run."""

    profile: Profile
    nu: float
    eta: float
    n_modes: int
    domain_length: float
    tail_tol: float | None = None
    x: np.ndarray = field(init=False, repr=False, compare=False)
    wavenumbers: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n, length = self.n_modes, self.domain_length
        params = self.profile.params
        if n < 16 or n % 2:
            raise ValueError(f"n_modes must be even and >= 16, got {n}")
        if length < 2 * self.profile.x_max:
            raise ValueError(
                f"domain_length={length} shorter than twice the profile "
                f"half-width {self.profile.x_max}"
            )
        if not 0 <= self.nu < params.nu0:
            raise WeightOutOfRange(
                f"weight nu={self.nu} outside [0, nu0={params.nu0:.6g})"
            )
        if self.nu == 0 and self.eta != 0:
            raise SingularMode(
                "eta != 0 with nu = 0: the antiderivative symbol is "
                "unbounded on the zero mode"
            )
        tol = self.tail_tol
        if tol is None:
            tol = 1e-12 * params.amplitude
        edge = min(length / 2, self.profile.x_max)
        psi_edge = float(self.profile.evaluate(np.array([edge]))[0][0])
        if psi_edge > tol:
            raise DomainTooSmall(
                f"profile tail {psi_edge:.3e} at x={edge:g} exceeds "
                f"tail tolerance {tol:.3e}"
            )
        object.__setattr__(self, "x", -length / 2 + length * np.arange(n) / n)
        object.__setattr__(
            self, "wavenumbers", 2 * np.pi * np.fft.fftfreq(n, d=length / n)
        )

    @property
    def nyquist_index(self) -> int:
        return self.n_modes // 2


def _realize_nyquist(vals: np.ndarray, n: int) -> np.ndarray:
    out = vals.astype(complex)
    out[n // 2] = out[n // 2].real
    return out


def _multiplier_matrix(multipliers: np.ndarray, dft: np.ndarray) -> np.ndarray:
    """Real physical-space matrix of a conjugate-symmetric Fourier multiplier."""
    return np.fft.ifft(multipliers[:, None] * dft, axis=0).real


def constant_symbol_on_grid(params: WaveParams, nu: float, eta: float,
                            n_modes: int, domain_length: float) -> np.ndarray:
    """Full constant-coefficient symbol on the fftfreq wavenumber grid.

    These are exactly the eigenvalues of the discretized operator for the
    zero-amplitude profile; the Nyquist entry carries the real part (the
    average over the two aliased wavenumbers +-k_N).
    """
    if nu == 0 and eta != 0:
        raise SingularMode("eta != 0 requires nu > 0")
    k, c = params.k, params.c
    kk = 2 * np.pi * np.fft.fftfreq(n_modes, d=domain_length / n_modes)
    s = 1j * kk - nu
    bracket = c - 3 * k - (c - k) * s**2
    if eta != 0:
        bracket = bracket + eta**2 / s**2
    return _realize_nyquist(s / (1 - s**2) * bracket, n_modes)


def _assemble(disc: Discretization) -> np.ndarray:
    params = disc.profile.params
    n = disc.n_modes
    psi, _, ddpsi = disc.profile.evaluate(disc.x)
    lam0 = constant_symbol_on_grid(params, disc.nu, disc.eta,
                                   n, disc.domain_length)
    s = 1j * disc.wavenumbers - disc.nu
    dft = np.fft.fft(np.eye(n), axis=0)
    a0 = _multiplier_matrix(lam0, dft)
    if not psi.any():
        return a0
    jmat = _multiplier_matrix(_realize_nyquist(s / (1 - s**2), n), dft)
    dmat = _multiplier_matrix(_realize_nyquist(s, n), dft)
    l_psi = np.diag(-3 * psi + ddpsi) + dmat @ (psi[:, None] * dmat)
    return a0 + jmat @ l_psi


def build_operator(profile: Profile, nu: float, eta: float,
                   n_modes: int = 1024,
                   domain_length: float | None = None,
                   tail_tol: float | None = None) -> np.ndarray:
    """Dense real matrix of the weighted linearized operator.

    Parameters
    ----------
    profile : Profile
        Solitary wave (or flat) background; sampled through its dense
        representation on the collocation grid.
    nu : float
        Exponential weight, in [0, nu0). nu = 0 demands eta = 0.
    eta : float
        Transverse wavenumber.
    n_modes : int
        Even number of collocation points.
    domain_length : float, optional
        Period of the box; default twice the profile half-width.

    Raises
    ------
    SingularMode, WeightOutOfRange, DomainTooSmall, ValueError
    """
    if domain_length is None:
        domain_length = 2 * profile.x_max
    disc = Discretization(profile, nu, eta, n_modes, domain_length, tail_tol)
    return _assemble(disc)


def build_weighted_L(profile: Profile, nu: float, n_modes: int = 1024,
                     domain_length: float | None = None) -> np.ndarray:
    """Weight-conjugated Hessian operator L alone (no J factor, no eta)."""
    if domain_length is None:
        domain_length = 2 * profile.x_max
    disc = Discretization(profile, nu, 0.0, n_modes, domain_length)
    params = profile.params
    k, c = params.k, params.c
    n = disc.n_modes
    psi, _, ddpsi = profile.evaluate(disc.x)
    s = 1j * disc.wavenumbers - nu
    dft = np.fft.fft(np.eye(n), axis=0)
    l0 = _multiplier_matrix(_realize_nyquist(c - 3 * k - (c - k) * s**2, n), dft)
    dmat = _multiplier_matrix(_realize_nyquist(s, n), dft)
    return l0 + np.diag(-3 * psi + ddpsi) + dmat @ (psi[:, None] * dmat)


@dataclass(frozen=True)
class SpectrumReport:
    """Spectrum of one discretized operator with cluster/resonance metadata."""

    eigenvalues: np.ndarray
    scale: float
    conjugation_defect: float
    cluster: np.ndarray
    continuous_band_estimate: float
    resonance_pair: tuple | None = None
    resonance_distances: tuple | None = None
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        self.eigenvalues.flags.writeable = False

    def to_dict(self) -> dict:
        d = {
            "eigenvalues": [[z.real, z.imag] for z in self.eigenvalues],
            "scale": self.scale,
            "conjugation_defect": self.conjugation_defect,
            "cluster": [[z.real, z.imag] for z in self.cluster],
            "continuous_band_estimate": self.continuous_band_estimate,
            "diagnostics": dict(self.diagnostics),
        }
        if self.resonance_pair is not None:
            d["resonance_pair"] = [[z.real, z.imag] for z in self.resonance_pair]
            d["resonance_distances"] = list(self.resonance_distances)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SpectrumReport":
        pair = d.get("resonance_pair")
        return cls(
            np.array([complex(a, b) for a, b in d["eigenvalues"]]),
            d["scale"],
            d["conjugation_defect"],
            np.array([complex(a, b) for a, b in d["cluster"]]),
            d["continuous_band_estimate"],
            None if pair is None else tuple(complex(a, b) for a, b in pair),
            None if pair is None else tuple(d["resonance_distances"]),
            dict(d.get("diagnostics", {})),
        )

    def to_csv(self) -> str:
        return csv_text(["re", "im"],
                        ((z.real, z.imag) for z in self.eigenvalues))


def _sorted_eigenvalues(a: np.ndarray) -> np.ndarray:
    try:
        ev = eigvals(a)
    except LinAlgError as exc:
        raise EigensolverFailure(str(exc)) from exc
    return ev[np.lexsort((ev.imag, ev.real))]


def _conjugation_defect(ev: np.ndarray) -> float:
    if ev.size == 0:
        return 0.0
    dist = np.abs(np.conj(ev)[:, None] - ev[None, :])
    return float(dist.min(axis=1).max())


def full_spectrum(a: np.ndarray, *, resonance_prediction=None,
                  cluster_rtol: float = CLUSTER_RTOL) -> SpectrumReport:
    """All eigenvalues of the discretized operator, sorted by (Re, Im).

    The near-zero cluster collects |lambda| <= cluster_rtol * max|lambda|.
    When a predicted resonance pair is supplied, the two closest
    eigenvalues are recorded and excluded (with the cluster) from the
    continuous-band estimate max Re over the remainder.
    """
    ev = _sorted_eigenvalues(np.asarray(a))
    scale = float(np.abs(ev).max()) if ev.size else 0.0
    in_cluster = np.abs(ev) <= cluster_rtol * scale
    pair = distances = None
    excluded = in_cluster.copy()
    if resonance_prediction is not None:
        p_plus, p_minus = resonance_prediction
        i_plus = int(np.argmin(np.abs(ev - p_plus)))
        d_minus = np.abs(ev - p_minus)
        d_minus[i_plus] = np.inf
        i_minus = int(np.argmin(d_minus))
        pair = (complex(ev[i_plus]), complex(ev[i_minus]))
        distances = (float(abs(ev[i_plus] - p_plus)),
                     float(abs(ev[i_minus] - p_minus)))
        excluded[[i_plus, i_minus]] = True
    rest = ev[~excluded]
    band = float(rest.real.max()) if rest.size else float("nan")
    return SpectrumReport(ev, scale, _conjugation_defect(ev),
                          ev[in_cluster], band, pair, distances)


def _cluster_or_raise(ev: np.ndarray, cluster_rtol: float,
                      separation: float) -> np.ndarray:
    scale = np.abs(ev).max()
    mask = np.abs(ev) <= cluster_rtol * scale
    cluster = ev[mask]
    rest = ev[~mask]
    if cluster.size and rest.size:
        gap = np.abs(rest).min() / max(np.abs(cluster).max(), 1e-300)
        if gap < separation:
            raise ClusterAmbiguity(
                f"near-zero cluster separated from the rest only by a "
                f"factor {gap:.3g} < {separation}"
            )
    return cluster


def double_zero_check(profile: Profile, nu: float, n_modes: int = 1024,
                      domain_length: float | None = None, *,
                      cluster_rtol: float = CLUSTER_RTOL,
                      separation: float = CLUSTER_SEPARATION):
    """Dimensions (geometric, algebraic) of the near-zero cluster at eta = 0.

    The algebraic dimension is the cluster size. The cluster's invariant
    subspace is extracted by two rounds of orthogonalized inverse
    iteration; the geometric dimension is the rank deficiency of the
    operator compressed to that subspace, at threshold
    cluster_rtol * max|lambda|. Expected (1, 2) for a solitary wave:
    the translation mode spans the kernel and the speed derivative
    attaches as a single generalized vector.
    """
    a = build_operator(profile, nu, 0.0, n_modes, domain_length)
    ev = _sorted_eigenvalues(a)
    cluster = _cluster_or_raise(ev, cluster_rtol, separation)
    alg = int(cluster.size)
    if alg == 0:
        return 0, 0
    scale = float(np.abs(ev).max())
    rng = np.random.default_rng(0)
    q = np.linalg.qr(rng.standard_normal((a.shape[0], alg)))[0]
    lu = lu_factor(a)
    for _ in range(2):
        q = np.linalg.qr(lu_solve(lu, q))[0]
    compressed = q.T @ a @ q
    rank = int(np.sum(np.linalg.svd(compressed, compute_uv=False)
                      > cluster_rtol * scale))
    return alg - rank, alg


def kernel_residuals(profile: Profile, nu: float, n_modes: int = 1024,
                     domain_length: float | None = None) -> dict:
    """Discrete checks of the kernel and Jordan chain at eta = 0.

    Returns relative 2-norm residuals of L (weighted phi') ~ 0 and of
    A (weighted dc phi) ~ -(weighted phi'); the latter is limited by the
    centered difference behind dc phi.
    """
    if domain_length is None:
        domain_length = 2 * profile.x_max
    disc = Discretization(profile, nu, 0.0, n_modes, domain_length)
    w = np.exp(nu * disc.x)
    _, dpsi, _ = profile.evaluate(disc.x)
    dcpsi, _ = profile.evaluate_dc(disc.x)
    g_translation = w * dpsi
    g_speed = w * dcpsi
    lmat = build_weighted_L(profile, nu, n_modes, domain_length)
    amat = _assemble(disc)
    norm_t = np.linalg.norm(g_translation)
    return {
        "translation_kernel": float(np.linalg.norm(lmat @ g_translation) / norm_t),
        "jordan_chain": float(np.linalg.norm(amat @ g_speed + g_translation) / norm_t),
    }


@dataclass(frozen=True)
class TrackPoint:
    """Measured vs predicted resonance pair at one transverse wavenumber."""

    eta: float
    measured: tuple
    predicted: tuple
    distance: float


@dataclass(frozen=True)
class ResonanceTrack:
    """Tracked resonance pair over a list of wavenumbers, with fitted laws.

    ``im_slope`` and ``re_curvature`` come from least squares of
    Im(lambda_+) on (eta, eta^3) and Re(lambda_+) on (eta^2, eta^4); for
    small eta they estimate sqrt(-lambda1^2) and lambda2.
    """

    points: list
    im_slope: float
    re_curvature: float
    coefficients: PuiseuxCoefficients

    @property
    def reference_im_slope(self) -> float:
        return float(np.sqrt(-self.coefficients.lambda1_sq))

    @property
    def reference_re_curvature(self) -> float:
        return self.coefficients.lambda2

    def to_csv(self) -> str:
        rows = [
            (p.eta, p.measured[0].real, p.measured[0].imag,
             p.predicted[0].real, p.predicted[0].imag, p.distance)
            for p in self.points
        ]
        return csv_text(["eta", "re_meas", "im_meas", "re_pred", "im_pred",
                         "dist"], rows)


def track_resonances(profile: Profile, nu: float, eta_list,
                     n_modes: int = 1024,
                     domain_length: float | None = None, *,
                     cluster_rtol: float = CLUSTER_RTOL) -> ResonanceTrack:
    """Follow the split eigenvalue pair across eta and fit its laws.

    For each eta the two eigenvalues closest to the quadratic prediction
    are recorded; a measured point farther than half the predicted
    magnitude raises MatchFailure (the pair has merged with the
    continuous band, which happens once the band crosses their location).
    """
    coeffs = puiseux_coefficients(profile.params)
    points = []
    for eta in eta_list:
        if eta == 0:
            a = build_operator(profile, nu, 0.0, n_modes, domain_length)
            report = full_spectrum(a, cluster_rtol=cluster_rtol)
            cl = report.cluster
            order = np.argsort(-cl.imag) if cl.size else np.array([], int)
            measured = tuple(complex(z) for z in cl[order][:2])
            if len(measured) < 2:
                measured = measured + (0j,) * (2 - len(measured))
            dist = float(max(np.abs(cl))) if cl.size else 0.0
            points.append(TrackPoint(0.0, measured, (0j, 0j), dist))
            continue
        predicted = resonance_pair_prediction(coeffs, eta)
        a = build_operator(profile, nu, eta, n_modes, domain_length)
        report = full_spectrum(a, resonance_prediction=predicted,
                               cluster_rtol=cluster_rtol)
        dist = max(report.resonance_distances)
        if dist > 0.5 * abs(predicted[0]):
            raise MatchFailure(
                f"closest eigenvalue at distance {dist:.3e} from the "
                f"prediction {predicted[0]:.3e} at eta={eta}"
            )
        points.append(TrackPoint(float(eta), report.resonance_pair,
                                 predicted, float(dist)))
    etas = np.array([p.eta for p in points if p.eta != 0])
    meas = np.array([p.measured[0] for p in points if p.eta != 0])
    if etas.size >= 2:
        im_slope = np.linalg.lstsq(
            np.column_stack([etas, etas**3]), meas.imag, rcond=None)[0][0]
        re_curv = np.linalg.lstsq(
            np.column_stack([etas**2, etas**4]), meas.real, rcond=None)[0][0]
    elif etas.size == 1:
        im_slope = meas.imag[0] / etas[0]
        re_curv = meas.real[0] / etas[0] ** 2
    else:
        im_slope = re_curv = float("nan")
    return ResonanceTrack(points, float(im_slope), float(re_curv), coeffs)
