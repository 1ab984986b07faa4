"""Exception hierarchy shared by all modules."""


class SphereLocError(Exception):
    """Base class for every error raised by :mod:`sphereloc`."""


class DomainError(SphereLocError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class SubdivisionLimit(SphereLocError, ArithmeticError):
    """Adaptive quadrature could not reach its tolerance."""


class DegenerateNeedle(DomainError):
    pass


class NonIntegrable(DomainError):
    """A power radial weight met an unbounded body."""


class PhaseDomain(DomainError):
    """An angular density cos(t + phase)**m changes sign on the interval."""


class Unbounded(DomainError):
    pass


class OriginNotInterior(DomainError):
    pass


class EmptyAdmissibleSet(DomainError):
    """No phase keeps the angular density nonnegative on the cone."""


class DegenerateInterval(DomainError):
    pass


class SandwichViolation(DomainError):
    """A body is not strictly between the prescribed inner and outer balls."""


class DivisionByZero(SphereLocError, ZeroDivisionError):
    pass


class BodyFileError(DomainError):
    """A body-definition document failed validation.

    ``line`` is the 1-based line in the source text where the offending
    node starts, when known.
    """

    def __init__(self, message, line=None, path=""):
        self.line = line
        self.path = path
        super().__init__(message)

    def diagnostic(self, filename="<body>"):
        where = f"{filename}:{self.line}" if self.line is not None else filename
        loc = f" [{self.path}]" if self.path else ""
        return f"{where}:{loc} {self}"
