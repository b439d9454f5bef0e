"""Exception hierarchy shared by all uscpol modules.

The CLI maps these onto exit codes: ConfigError -> 2, NumericsError and
its subclasses -> 3, ResolvabilityError -> 4.
"""


class UscpolError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(UscpolError):
    """Malformed or invalid configuration input.

    Carries the 1-based line/column of the offending token when known.
    """

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            loc = f"line {line}"
            if column is not None:
                loc += f", column {column}"
            message = f"{loc}: {message}"
        super().__init__(message)


class ValidationError(ConfigError):
    """A parameter set violates one of its invariants."""


class NumericsError(UscpolError):
    """Base class for numeric/domain failures."""


class DomainError(NumericsError):
    """Input outside the mathematical domain of an operation."""


class PoleError(NumericsError):
    """Evaluation requested at (or too close to) a pole of a lossless response."""


class GapError(DomainError):
    """Frequency falls inside the polariton gap where no branch exists."""

    def __init__(self, omega, lower, upper):
        self.omega = omega
        self.lower = lower
        self.upper = upper
        super().__init__(
            f"omega = {omega:.12g} lies inside the polariton gap "
            f"({lower:.12g}, {upper:.12g}); no branch is resonant there"
        )


class ResolutionError(DomainError):
    """A numeric grid is too coarse for the requested evaluation."""


class RootFindingError(NumericsError):
    """Bracketing or bisection failed; carries diagnostic brackets."""

    def __init__(self, message, brackets=None):
        self.brackets = brackets
        if brackets:
            message += f" (brackets: {brackets})"
        super().__init__(message)


class ResolvabilityError(UscpolError):
    """A spectral feature is too small to resolve against the linewidths."""


class InsufficientCoverageError(ResolvabilityError):
    """A tomography branch has too few valid records to reconstruct."""
