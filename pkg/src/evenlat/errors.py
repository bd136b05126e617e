"""Exception types raised across the package."""


class LatticeError(Exception):
    """Base class for all errors raised by evenlat."""


class DimensionError(LatticeError, ValueError):
    pass


class DefinitenessError(LatticeError, ValueError):
    pass


class EvennessError(LatticeError, ValueError):
    pass


class DomainError(LatticeError, ValueError):
    pass


class UnsupportedError(LatticeError):
    pass


class BudgetExceeded(LatticeError):
    """A node or element cap was hit before the computation finished.

    ``partial`` carries whatever was found so far (a count or a list).
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class NotAnAutomorphism(LatticeError, ValueError):
    pass


class MalformedCode(LatticeError, ValueError):
    pass


class ConstructionFailure(LatticeError):
    pass


class ClosureError(LatticeError, ValueError):
    pass


class ParseError(LatticeError, ValueError):
    pass
