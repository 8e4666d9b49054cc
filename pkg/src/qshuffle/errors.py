"""Exception types shared across the package."""


class QshuffleError(Exception):
    """Base class for all package errors."""


class FlavorMismatchError(QshuffleError):
    """Operands or parameters belong to different algebra flavors."""


class GuardExceededError(QshuffleError):
    """A symmetrization would generate more terms than the configured guard."""


class ExactDivisionError(QshuffleError):
    """A division that is guaranteed exact by theory failed; indicates either
    an input outside the algebra or an internal inconsistency."""


class ContractViolationError(QshuffleError):
    """An input violates a documented precondition (e.g. non-symmetric input
    where symmetry is required, or an incomplete substitution plan)."""
