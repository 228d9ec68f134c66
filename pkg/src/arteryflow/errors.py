"""Exception hierarchy shared by the solver, the I/O layer and the CLI."""


class ArteryFlowError(Exception):
    """Base class for all errors raised by this package."""


class DegenerateAreaError(ArteryFlowError, ValueError):
    """A quantity needing ``a > 0`` was asked of a dry (``a == 0``) cell."""


class InconsistentStateError(ArteryFlowError, ValueError):
    """A dry cell carries a non-zero discharge."""


class NonPhysicalError(ArteryFlowError, ValueError):
    """Requested equilibrium has no positive area in some cell."""


class NumericalFailure(ArteryFlowError, RuntimeError):
    """The time loop produced NaN/Inf or ran completely dry.

    ``time`` is the simulation time at which the failure was detected,
    when known.
    """

    def __init__(self, message, time=None):
        if time is not None:
            message = f"{message} (t = {time:.17g} s)"
        super().__init__(message)
        self.time = time


class AllDryError(NumericalFailure):
    """Every cell has ``a == 0``; no wave speed bounds the time step."""


class ConfigError(ArteryFlowError, ValueError):
    """Invalid configuration text, key or value."""

    def __init__(self, message, *, field=None, line=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        if where:
            message = f"{', '.join(where)}: {message}"
        super().__init__(message)
        self.field = field
        self.line = line


class WindowError(ArteryFlowError, ValueError):
    """Pulse measurement windows overlap the interface or are missing."""
