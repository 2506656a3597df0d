"""Exception hierarchy shared by every module of the package."""


class CurveAlgebraError(Exception):
    """Base class for all errors raised by the package."""


class DomainError(CurveAlgebraError, ValueError):
    """An operation was called outside its precondition.

    ``condition`` names the mathematical condition that failed; the CLI prints
    it as the diagnostic.
    """

    def __init__(self, message: str, condition: str = "precondition"):
        super().__init__(message)
        self.condition = condition

    def __str__(self) -> str:
        return f"{self.condition}: {self.args[0]}"


class ParseError(DomainError):
    """Generator text could not be parsed."""

    def __init__(self, message: str):
        super().__init__(message, condition="subgroup syntax")


class NotPolarizingSubgroupError(DomainError):
    """The subgroup does not have order d inside K(L)."""

    def __init__(self, message: str):
        super().__init__(message, condition="not a polarizing-degree subgroup")


class NotIsotropicError(DomainError):
    """The subgroup pairs non-trivially under the commutator pairing."""

    def __init__(self, message: str):
        super().__init__(message, condition="no pushforward polarization (subgroup not isotropic)")


class NotRealizableError(DomainError):
    """A requested configuration cannot be realized inside K(L)."""

    def __init__(self, message: str):
        super().__init__(message, condition="not realizable")


class SearchBoundExceeded(DomainError):
    """Exhaustive partition search refused because the group is too large."""

    def __init__(self, message: str):
        super().__init__(message, condition="partition search bound")


class InconsistentRamificationError(CurveAlgebraError):
    """Riemann-Hurwitz has no integral non-negative solution."""


class InvariantViolation(CurveAlgebraError):
    """An internal invariant failed. Reaching this is a bug, never bad input."""
