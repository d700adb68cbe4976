"""
Error hierarchy for the lab.

Every error carries the process exit code the command line maps it to:
configuration problems exit with 2, numerical failures with 1.
"""

from typing import Any, Optional


class MfchError(Exception):
    exit_code = 1

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


# -------------------------------------------------
# CONFIGURATION (exit 2)
# -------------------------------------------------
class ConfigError(MfchError):
    exit_code = 2


# -------------------------------------------------
# NUMERICAL (exit 1)
# -------------------------------------------------
class NumericalError(MfchError):
    exit_code = 1


class ParameterError(NumericalError):
    """Argument outside the documented precondition."""


class ShapeError(ParameterError):
    pass


class DomainError(NumericalError):
    """Point outside the physical simplex of a billiard potential."""


class CapabilityError(NumericalError):
    """Requested derivative order exceeds what the object provides."""


class DegenerateCollisionError(NumericalError):
    """Tangential collision: the reflection law is undefined."""


class SpecInconsistencyError(NumericalError):
    """A traced trajectory entered the well region."""


class ConstructionError(NumericalError):
    pass


class NoConvergenceError(NumericalError):
    pass


class DegeneracyError(NumericalError):
    """Kernel of a bordered operator larger than one."""


class ContinuationError(NumericalError):
    def __init__(self, message: str, last_good: float, path: Optional[list] = None):
        super().__init__(message, {"last_good": last_good, "path": path or []})
        self.last_good = last_good
        self.path = path or []


class ResolutionError(NumericalError):
    pass


class InvalidStateError(NumericalError):
    pass


class BlowUpError(NumericalError):
    def __init__(self, message: str, last_stable: Any = None, step: int = -1):
        super().__init__(message, {"step": step})
        self.last_stable = last_stable
        self.step = step


class GeometricBreakdownError(NumericalError):
    pass
