"""Exception hierarchy shared by every module."""


class VugError(Exception):
    """Base class for all errors raised by vugraph."""


class InputError(VugError, ValueError):
    """Malformed input: unknown identifiers, bad files, illegal profiles."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class SizeLimitError(VugError):
    """An exhaustive computation would exceed its configured cap."""


class ConstructionInfeasible(VugError):
    """A worst-case generator's structural precondition is not met."""


class NoPureEquilibrium(VugError):
    """The game has no pure Nash equilibrium."""


class DegenerateGame(VugError):
    """The optimal welfare is zero, so ratios are undefined."""
