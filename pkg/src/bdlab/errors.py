"""Exception types shared across the library.

Every failure mode promised by a public operation maps to one class here,
so callers can catch by contract rather than by message text.
"""


class LabError(Exception):
    """Base class for all bdlab errors."""


class PoleAtOne(LabError):
    """zeta or a derived quantity was requested exactly at s = 1."""


class AccuracyUnreachable(LabError):
    """The requested absolute error cannot be met within the term budget."""


class DomainTooSmall(LabError):
    """Argument below the documented domain of an asymptotic expansion."""


class LimitTooLarge(LabError):
    """Sieve or table limit beyond the supported envelope."""


class CutoffInsufficient(LabError):
    """Integration cutoff cannot push the rigorous tail bound below tolerance."""


class FormatError(LabError):
    """Input file does not parse under the documented format."""


class ValidationError(LabError):
    """Parsed input violates a structural invariant.

    ``offending`` carries the first value at which the invariant failed,
    when one exists.
    """

    def __init__(self, message, offending=None):
        super().__init__(message)
        self.offending = offending


class HeightExceeded(LabError):
    """A zero-ordinate query reaches beyond the validated table height."""


class TableTooSmall(LabError):
    """An arithmetic table does not cover the requested range."""


class ZerosInsufficient(LabError):
    """Zero table does not extend past the requested integration range."""


class WindowViolation(LabError):
    """A sliding zero-count window exceeded its cap.

    Raised only in strict mode; ``interval`` is the witness window.
    """

    def __init__(self, message, interval=None):
        super().__init__(message)
        self.interval = interval


class NoTypicalV(LabError):
    """The admissible V-window was exhausted without finding a typical V."""


class KappaExceedsK(LabError):
    """The asymptotic formula for kappa collides with K at this N.

    The contour construction targets very large N; at desk scale the
    computed kappa usually reaches or exceeds K, in which case an explicit
    override must be supplied instead of silently clamping.
    """


class ZeroTableTooShort(LabError):
    """Contour construction needs typicality data above the table height."""


class NearPole(LabError):
    """Quadrature path passes too close to the moving pole at i*tau."""


class IllConditioned(UserWarning):
    """More than half of the Gram spectrum was truncated; result is flagged."""
