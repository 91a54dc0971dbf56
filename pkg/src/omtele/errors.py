"""Exception and warning types shared across the package."""


class OmteleError(Exception):
    """Base class for errors raised by this package."""


class ConvergenceError(OmteleError):
    """A truncated-basis computation lost more probability than allowed.

    ``required_cutoff`` is the smallest cutoff found to satisfy the tolerance,
    or None when it could not be determined.
    """

    def __init__(self, message: str, required_cutoff: int | None = None):
        if required_cutoff is not None:
            message = f"{message} (smallest adequate cutoff: {required_cutoff})"
        super().__init__(message)
        self.required_cutoff = required_cutoff


class ZeroNormError(OmteleError):
    """The state has zero norm, e.g. annihilation applied to vacuum."""


class GuardError(OmteleError):
    """A physical-parameter guard was violated beyond its error threshold."""


class GuardWarning(UserWarning):
    """A physical-parameter guard entered its warning band."""


class InstabilityError(OmteleError):
    """An ODE integration diverged."""


class QuadratureError(OmteleError):
    """Numerical quadrature failed to reach its error target."""


class UnsupportedFormulaError(OmteleError):
    """No closed-form expression exists for the requested case."""


class ConfigError(OmteleError):
    """Invalid run configuration; ``path`` locates the offending field."""

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path
