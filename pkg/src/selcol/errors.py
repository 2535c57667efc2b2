class SelColError(Exception):
    """Base class for all errors raised by this package."""


class InputError(SelColError, ValueError):
    """Arguments violate an operation's precondition."""


class UndefinedDensityError(InputError):
    pass


class CapabilityError(SelColError):
    """Input exceeds a configured size guard or enumeration budget."""


class SolverFailure(SelColError):
    """A numerical or combinatorial routine could not finish its contract."""


class PerfectnessViolation(SolverFailure):
    """The input graph turned out not to be perfect."""


class AccuracyError(SolverFailure):
    """A theta value could not be rounded to an integer safely."""

    def __init__(self, message, theta=None):
        super().__init__(message)
        self.theta = theta


class GenerationFailure(SelColError):
    def __init__(self, message, closest_density=None):
        super().__init__(message)
        self.closest_density = closest_density


class InstanceFormatError(InputError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
