"""Exception types shared across the package."""


class CanodualError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatchError(CanodualError):
    """An argument's shape is inconsistent with the program it is used with."""


class DualInfeasibleError(CanodualError):
    """A dual point lies outside the dual feasible space (F not in Col(G)).

    Carries the column-space residual norm that failed the membership test.
    """

    def __init__(self, residual: float, message: str | None = None):
        self.residual = float(residual)
        super().__init__(
            message
            or f"outside dual feasible space (column-space residual {self.residual:.3e})"
        )


class SingularGeometryError(CanodualError):
    """An operation requiring an invertible G matrix met a singular one."""


class NoFeasibleStartError(CanodualError):
    """No starting point with positive definite G could be found."""


class InstanceError(CanodualError):
    """A problem instance violates its structural invariants."""


class ParseError(CanodualError):
    """Malformed input text.  ``location`` points at the offending field."""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class CoincidentAtomsError(CanodualError):
    """Two atoms coincide, so the pair potential diverges."""
