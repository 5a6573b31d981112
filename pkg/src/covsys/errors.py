"""Exception hierarchy for covsys."""


class CovsysError(ValueError):
    """Base class for every error raised by the library."""


class InvalidModulus(CovsysError):
    pass


class EmptySystem(CovsysError):
    pass


class ScanLimitExceeded(CovsysError):
    pass


class ParseError(CovsysError):
    """Malformed ECS or trace input.

    ``line`` and ``column`` are 1-based; either may be None when the
    position is unknown (e.g. JSON schema errors).
    """

    def __init__(self, message, line=None, column=None, source=None):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        super().__init__(self.format())

    def format(self):
        where = [str(x) for x in (self.source, self.line, self.column) if x is not None]
        return ":".join(where + [" " + self.message]) if where else self.message


# cyclotomic
class NotADivisor(CovsysError):
    pass


class NotVanishing(CovsysError):
    pass


class TooManyPrimeFactors(CovsysError):
    pass


class ZeroVector(CovsysError):
    pass


class NegativeCoefficient(CovsysError):
    pass


class InvalidCoset(CovsysError):
    pass


# reduction
class TargetNotPresent(CovsysError):
    pass


class CosetNotPresent(CovsysError):
    pass


class NotExact(CovsysError):
    pass


class AlreadyTrivial(CovsysError):
    pass


class NoEligibleMaximalModulus(CovsysError):
    pass


class WrongPrimeSupport(CovsysError):
    pass


class EnumerationLimitExceeded(CovsysError):
    pass
