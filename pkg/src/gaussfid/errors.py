"""Exception hierarchy shared by all gaussfid modules."""


class GaussfidError(Exception):
    """Base class for every error raised by this package."""


class DomainError(GaussfidError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class TruncationError(GaussfidError):
    """The Fock-basis truncation is too small for the requested state."""


class InvalidDensityError(GaussfidError, ValueError):
    """A matrix is not a valid density operator (significant negative eigenvalue)."""


class IndeterminateGainError(GaussfidError, ValueError):
    def __init__(self, quadrature):
        super().__init__(
            f"gain on the {quadrature} quadrature is indeterminate: input mean is zero"
        )
        self.quadrature = quadrature


class InconsistentStatisticsError(GaussfidError, ValueError):
    """Measured statistics imply a negative added-noise variance."""


class SamplesParseError(GaussfidError, ValueError):
    def __init__(self, message, path=None, line=None):
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)
        self.path = path
        self.line = line


class EmptySamplesError(SamplesParseError):
    pass


class InsufficientDataError(GaussfidError, ValueError):
    pass


class UnidentifiableError(GaussfidError, ValueError):
    """The measurement angles cannot identify the state's axes."""


class ConsistencyError(GaussfidError, ArithmeticError):
    """A computed fidelity left [0, 1] by more than rounding noise."""
