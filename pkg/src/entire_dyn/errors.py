"""Exception types shared by all modules."""


class EntireDynError(Exception):
    """Base class for every error raised by this package."""


class DomainError(EntireDynError, ValueError):
    pass


class PreconditionError(EntireDynError, ValueError):
    pass


class ConvergenceError(EntireDynError, ArithmeticError):
    pass


class PoleError(EntireDynError, ZeroDivisionError):
    pass


class ResidualError(EntireDynError, ArithmeticError):
    pass


class RootFindingError(EntireDynError, ArithmeticError):
    pass


class ConfigError(EntireDynError, ValueError):
    pass
