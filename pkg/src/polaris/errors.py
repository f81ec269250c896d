from typing import Any, Optional


class PolarisError(Exception):
    """Base class for every error raised by polaris."""


class DimensionMismatch(PolarisError, ValueError):
    """Subspaces or vectors that do not live in the same ambient space."""


class UnsupportedConfiguration(PolarisError, ValueError):
    """Parameters outside of what the geometry supports (e.g. parabolic at p=2)."""


class PreconditionError(PolarisError, ValueError):
    def __init__(self, message: str, obj: Any = None):
        super().__init__(message)
        self.obj = obj


class SpecialMapViolation(PolarisError):
    def __init__(self, message: str, obj: Any = None):
        super().__init__(message)
        self.obj = obj


class InconsistentInput(PolarisError):
    def __init__(self, message: str, obj: Any = None):
        super().__init__(message)
        self.obj = obj


class BudgetExceeded(PolarisError):
    """A search ran out of nodes, trials or iterations.

    Budget exhaustion is never reported as a negative answer; `partial` holds
    whatever was collected before the cap was hit.
    """

    def __init__(self, message: str, partial: Optional[Any] = None):
        super().__init__(message)
        self.partial = partial


class Rejection(PolarisError):
    """A verifier clause failed. `clause` names it, `obj` is the offending object."""

    def __init__(self, clause: str, message: str, obj: Any = None):
        super().__init__(f"[{clause}] {message}")
        self.clause = clause
        self.message = message
        self.obj = obj
