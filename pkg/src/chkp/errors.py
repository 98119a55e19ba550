"""Exception types shared across the package."""


class ChkpError(Exception):
    """Base class for all errors raised by this package."""


class ExistenceError(ChkpError):
    """No solitary wave exists for the requested parameters (needs c > 3k)."""


class ConvergenceError(ChkpError):
    """A numerical construction did not reach its accuracy target."""


class SingularArgument(ChkpError):
    """A symbol was evaluated at a point where it is not defined."""


class WeightOutOfRange(ChkpError):
    """Exponential weight outside the admissible interval."""


class SingularMode(ChkpError):
    """Unweighted antiderivative symbol requested on the zero Fourier mode."""


class DomainTooSmall(ChkpError):
    """Profile tail at the edge of the periodic domain exceeds tolerance."""


class EigensolverFailure(ChkpError):
    """Dense eigensolver did not converge."""


class ClusterAmbiguity(ChkpError):
    """Near-zero eigenvalue cluster is not cleanly separated from the rest."""


class MatchFailure(ChkpError):
    """No computed eigenvalue lies acceptably close to the predicted one."""


class ConfigError(ChkpError):
    """Invalid command-line or config-file input (aggregated message)."""
