"""Exception types shared across the toolkit."""


class DomainError(ValueError):
    """An input lies outside the domain of the requested operation."""


class CapacityError(DomainError):
    """A requested Hilbert space exceeds the dense-diagonalization budget."""


class MultiplicityError(RuntimeError):
    """The Liouvillian null space is not one-dimensional."""


class NoFitError(RuntimeError):
    """No line assignment or flanking-peak pair satisfied the constraints.

    ``best`` carries the best rejected candidate, or ``None`` if there was none.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class SpectrumParseError(ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
