"""Exception and warning types shared across the package."""


class CrasimError(Exception):
    """Base class for all package-specific errors."""


class UnsupportedOperatorError(CrasimError, ValueError):
    """Requested operator does not exist on the given local basis."""


class DimensionMismatchError(CrasimError, ValueError):
    """Operator/state dimensions are incompatible."""


class UndefinedObservableError(CrasimError, ValueError):
    """Observable is undefined, e.g. population below the safe-division floor."""


class MultistabilityError(CrasimError, RuntimeError):
    """Steady-state kernel is degenerate; use time evolution or mean-field."""


class ConvergenceError(CrasimError, RuntimeError):
    """Iterative solver failed to reach its tolerance."""


class NoJumpPossibleError(CrasimError, RuntimeError):
    """All jump operators annihilate the current state."""


class ConfigError(CrasimError, ValueError):
    """Scenario configuration is malformed or inconsistent."""


class SolverError(CrasimError, RuntimeError):
    """A solver failed at run time (as opposed to bad configuration)."""


class RegimeWarning(UserWarning):
    """Parameters are outside the validity window of an asymptotic formula."""


class PositivityWarning(UserWarning):
    """A density matrix violated positivity/trace bounds beyond tolerance."""
