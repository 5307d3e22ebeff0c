"""Exception hierarchy shared by all modules.

Everything raised on purpose derives from CczsgError so the CLI can
convert failures into machine-readable JSON with a stable error tag.
"""


class CczsgError(Exception):
    """Base class for all package errors."""

    @property
    def tag(self) -> str:
        return type(self).__name__


class DimensionMismatch(CczsgError):
    """Operands with incompatible shapes."""


class ZeroVector(CczsgError):
    """A nonzero vector was required (dual-norm certificate)."""


class InconsistentMoments(CczsgError):
    """Moment data whose implied composite covariance is not PSD."""


class NotPSD(CczsgError):
    """Matrix fails the positive-semidefinite tolerance."""


class POutOfRange(CczsgError):
    """Confidence level outside the valid range of the ambiguity model."""


class ModulusViolation(CczsgError):
    """Waveform entry off the constant-modulus circle."""


class LengthMismatch(CczsgError):
    """Waveforms of unequal length."""


class EmptyStrategySet(CczsgError):
    """Norm bound too small for any valid mixed strategy."""


class SlaterViolated(CczsgError):
    """No strictly feasible strategy; strong duality not guaranteed."""


class GapTooLarge(CczsgError):
    """Primal and dual optima disagree beyond tolerance."""


class SolverFailure(CczsgError):
    """Conic solver did not return a usable optimal point."""


class UnsampleableModel(CczsgError):
    """Calibration requested without a concrete sampling law."""


class SamplerStarvation(CczsgError):
    """Rejection sampler exhausted its attempt budget."""


class SchemaError(CczsgError):
    """JSON document does not match the expected schema."""
