"""Exception taxonomy for the omsteady package.

Every error raised by this package derives from :class:`OmsteadyError`,
so callers can catch the whole family with one except clause. The CLI
maps these onto process exit codes (see :mod:`omsteady.cli`).
"""


class OmsteadyError(Exception):
    """Base class for all omsteady errors."""


class InvalidParams(OmsteadyError):
    """A parameter record violates its domain (sign, range, consistency)."""


class UncertaintyViolation(OmsteadyError):
    """A covariance matrix violates the Heisenberg bound."""


class DegenerateState(OmsteadyError):
    """A covariance matrix is singular or otherwise unusable."""


class AssumptionViolated(OmsteadyError):
    """An operation's structural assumption does not hold for the input."""


class CorrelatedBathUnsupported(OmsteadyError):
    """White-noise thermal surrogate requested where the two mechanical
    baths would be correlated (unequal damping with nonzero cross
    damping); no uncorrelated surrogate exists for that case."""


class UnstableSystem(OmsteadyError):
    """The drift matrix has a non-decaying eigenvalue; no steady state."""


class SolveFailure(OmsteadyError):
    """A linear solve failed (singular or badly conditioned system)."""


class QuadratureFailure(OmsteadyError):
    """Adaptive integration could not meet the requested tolerance."""


class FixedPointDivergence(OmsteadyError):
    """Fixed-point iteration failed to converge within the iteration cap."""


class InvalidRegime(OmsteadyError):
    """Closed-form expression evaluated outside its regime of validity."""


class UnstableRegime(OmsteadyError):
    """Closed-form expression evaluated past its stability boundary."""


class UndampedDarkMode(OmsteadyError):
    """The dark mode has no damping channel, so the model has no steady
    state (requires nonzero mechanical mixing and optical damping)."""


class OracleMismatch(OmsteadyError):
    """A paired cross-check between two independent routes to the same
    quantity exceeded its tolerance; the output was not written."""
