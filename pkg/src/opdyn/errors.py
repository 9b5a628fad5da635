"""Exception hierarchy shared by every opdyn module."""

from __future__ import annotations


class OpdynError(Exception):
    """Base class for all analysis errors."""


class ZeroWeight(OpdynError):
    """A zero weight was found where an invertible operator was required."""


class UnboundedWeight(OpdynError):
    """The presented weight or mass data is not finite."""


class NonInvertibleMap(OpdynError):
    """The operation needs a bijective map (no unilateral chains)."""


# short alias
NonInvertible = NonInvertibleMap


class InfiniteWanderingMass(OpdynError):
    """The wandering set does not have finite positive mass."""


WanderingMassInfinite = InfiniteWanderingMass


class NotDissipative(OpdynError):
    """The system has a conservative part of positive measure."""


class PreconditionFailed(OpdynError):
    pass


class DistortionUnbounded(OpdynError):
    pass


class VerificationFailed(OpdynError):
    """A numerical identity check failed; ``atom`` is the counterexample."""

    def __init__(self, message: str, atom=None, check: str | None = None,
                 deviation: float | None = None):
        super().__init__(message)
        self.atom = atom
        self.check = check
        self.deviation = deviation


class ParseError(OpdynError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


class SchemaError(OpdynError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
