"""Exception hierarchy shared by every solver and checker."""


class FucikError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(FucikError, ValueError):
    pass


class UnsupportedKind(FucikError, TypeError):
    pass


class DegenerateInput(FucikError, ValueError):
    pass


class NonFinite(FucikError, ArithmeticError):
    pass


class StepTooLarge(FucikError, ValueError):
    pass


class NonConvergence(FucikError, RuntimeError):
    pass


class BracketFailure(NonConvergence):
    """The root-finding bracket does not enclose the requested branch."""


class QuadratureBudgetExceeded(FucikError, RuntimeError):
    pass


class PathBroken(NonConvergence):
    """Consecutive mountain-pass waypoints drifted apart beyond the budget."""


class InsufficientData(FucikError, ValueError):
    pass


class ConfigError(FucikError, ValueError):
    pass
