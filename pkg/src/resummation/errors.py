"""Exception hierarchy shared by every module."""


class ResummationError(Exception):
    """Base class for all library errors."""


class GeneratorExhausted(ResummationError):
    """A coefficient sequence cannot supply the requested number of terms."""


class ConvergenceFailure(ResummationError):
    """A numerical limit (quadrature, ladder, Padé sweep) did not stabilize."""


class DegenerateDenominator(ResummationError):
    """Every entry of a Shanks row is 0/0."""


class InsufficientTerms(ResummationError):
    """Not enough partial sums for the requested extrapolation order."""


class InconsistentSummation(ResummationError):
    """Finite additivity plus linearity admit no finite value."""


class PoleOnPath(ResummationError):
    """A continuation pole lies on the Borel integration path [0, inf)."""


class DegenerateMoments(ResummationError):
    """A moment sequence terminates and cannot represent the requested depth."""


class SingularSystem(ResummationError):
    """The Padé denominator system is singular for the requested orders."""


class TailMismatch(ResummationError):
    """Even/odd coefficient tails do not extrapolate consistently."""


class ModeBudgetExceeded(ResummationError):
    """Residual heat-mode coefficients fail the n**-3 decay check."""


class ResourceLimit(ResummationError):
    """Requested order exceeds the configured bound."""


class DomainError(ResummationError, ValueError):
    """Argument outside the physical domain of the formula."""
