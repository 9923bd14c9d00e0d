"""Exception hierarchy shared by all modules."""


class ChiralXXZError(Exception):
    """Base class for library errors."""


class InvalidArgumentError(ChiralXXZError, ValueError):
    """An argument is outside the domain of an operation."""


class ContractViolationError(ChiralXXZError, ArithmeticError):
    """A numerical contract (Hermiticity, normalization, ...) was broken."""


class AmbiguityError(ContractViolationError):
    """Adiabatic tracking could not choose between two candidate states.

    Attributes
    ----------
    x : float
        Field value at which the tie occurred.
    candidates : tuple of int
        Eigenvector indices of the two tied candidates.
    overlaps : tuple of float
        Their overlap magnitudes with the previous state.
    """

    def __init__(self, x, candidates, overlaps):
        self.x = x
        self.candidates = tuple(candidates)
        self.overlaps = tuple(overlaps)
        super().__init__(
            f"ambiguous adiabatic tracking at x={x:.6g}: candidates "
            f"{self.candidates} have overlaps {self.overlaps}"
        )


class UndefinedRatioError(ChiralXXZError, ZeroDivisionError):
    """A coupling ratio is 0/0, e.g. at zero field."""


class CapExceededError(ContractViolationError):
    """A problem size exceeds a configured dimension cap."""
