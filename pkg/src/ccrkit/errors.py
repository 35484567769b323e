"""Shared exception types."""


class StructureError(ValueError):
    """Operands belong to different rings/groups or have mismatched shape."""


class CapacityError(RuntimeError):
    """An enumeration or dense materialization exceeds the configured cap."""


class PreconditionError(ValueError):
    """A documented mathematical precondition of the operation fails."""


class NumericsError(RuntimeError):
    """A numerical procedure failed to converge or lost rank."""


class CoverageError(PreconditionError):
    """A sampling assignment leaves cells uncovered."""
