"""Exception types shared across the package."""


class FaradaySwapError(ValueError):
    pass


class DuplicateSubsystem(FaradaySwapError):
    pass


class UnknownSubsystem(FaradaySwapError):
    pass


class DegenerateState(FaradaySwapError):
    pass


class RegisterMismatch(FaradaySwapError):
    pass


class SingularDenominator(FaradaySwapError, ZeroDivisionError):
    pass


class UnknownOutcome(FaradaySwapError):
    pass


class EmptySweep(FaradaySwapError):
    pass
