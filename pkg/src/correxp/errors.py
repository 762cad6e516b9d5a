"""Exception types shared across the package.

The command line maps these onto distinct exit statuses, so the
hierarchy is deliberately flat and explicit.
"""


class CorrexpError(Exception):
    """Base class for all package-specific failures."""


class DomainError(CorrexpError, ValueError):
    """An argument is outside the mathematical domain of the operation."""


class UsageError(CorrexpError, ValueError):
    """The call itself is malformed: bad shapes, unknown names, bad flag combos."""


class SingularMatrixError(DomainError):
    """A matrix required to be invertible (or positive definite) is not."""


class NumericalInstabilityError(CorrexpError, RuntimeError):
    """A numerical procedure failed to converge to its stated tolerance."""


class ResourceGuardError(CorrexpError, RuntimeError):
    """A computation was refused because it would exceed a hard size guard."""
