"""Exception types shared across the package."""


class GroupDeconvError(Exception):
    """Base class for groupdeconv-specific failures."""


class ParameterError(GroupDeconvError, ValueError):
    """A parameter violates a documented precondition."""


class DataFormatError(GroupDeconvError, ValueError):
    """An input file could not be parsed; carries the offending location."""

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


class DenominatorTooSmall(GroupDeconvError, RuntimeError):
    """|phi_hat(u)| fell below the integration floor inside the requested range."""

    def __init__(self, u, value, floor):
        super().__init__(
            f"|phi_hat({u:.6g})| = {value:.3e} is below the integration floor "
            f"{floor:.3e}; the log-derivative is unreliable past this point"
        )
        self.u = u
        self.value = value
        self.floor = floor


class CutoffExceedsRange(GroupDeconvError, ValueError):
    """Requested spectral cutoff lies beyond the evaluated frequency range."""


class LevelNotReached(GroupDeconvError, RuntimeError):
    """A characteristic-function modulus never fell to the requested level."""
