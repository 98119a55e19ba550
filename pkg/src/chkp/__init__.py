"""Solitary waves of the Camassa-Holm equation on a constant background
and their transverse spectral stability in exponentially weighted spaces.

The package constructs the smooth solitary wave, evaluates its conserved
functionals in closed form and by quadrature, samples the weighted
continuous-spectrum symbol, assembles the splitting coefficients of the
double zero eigenvalue, and cross-checks everything against a Fourier
collocation discretization of the linearized operator.
"""

from .errors import (
    ChkpError,
    ClusterAmbiguity,
    ConfigError,
    ConvergenceError,
    DomainTooSmall,
    EigensolverFailure,
    ExistenceError,
    MatchFailure,
    SingularArgument,
    SingularMode,
    WeightOutOfRange,
)
from .functionals import (
    FunctionalReport,
    antiderivative_from_right,
    energy_closed,
    energy_derivative_closed,
    euler_lagrange_residual,
    fredholm_pairing,
    functionals_closed,
    functionals_quadrature,
    mass_closed,
    mass_derivative_closed,
    norm2_closed,
)
from .profile import (
    Profile,
    WaveParams,
    default_x_max,
    flat_profile,
    invariant_residuals,
    kdv_profile,
    kdv_residual,
    solve_profile,
)
from .puiseux import (
    PuiseuxCoefficients,
    kdv_limit_coefficients,
    kp2_resonance,
    puiseux_coefficients,
    puiseux_from_functionals,
    resonance_pair_prediction,
)
from .specdisc import (
    Discretization,
    ResonanceTrack,
    SpectrumReport,
    TrackPoint,
    build_operator,
    build_weighted_L,
    constant_symbol_on_grid,
    double_zero_check,
    full_spectrum,
    kernel_residuals,
    track_resonances,
)
from .symbol import (
    BandBound,
    SymbolCurve,
    continuous_spectrum_bound,
    default_xi_max,
    figure1_curve,
    hf_beta0,
    hf_symbol_real,
    symbol_lambda,
    symbol_real_part,
)

__version__ = "0.1.0"
