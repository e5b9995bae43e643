"""Exception hierarchy shared by all crnbal modules."""


class CRNError(Exception):
    """Base class for crnbal errors."""


class StructuralError(CRNError, ValueError):
    """A network or matrix violates a structural invariant."""


class ParseError(CRNError, ValueError):
    """Malformed ``.crn`` text.

    Attributes:
        line: 1-based line number of the offending statement.
        column: 1-based column of the offending token.
        reason: Human-readable description without the location prefix.
    """

    def __init__(self, reason: str, line: int, column: int = 1):
        self.reason = reason
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {reason}")


class NotReversibleError(CRNError):
    """Raised when an analysis needs every reaction paired with its reverse."""

    def __init__(self, unpaired):
        self.unpaired = tuple(unpaired)
        super().__init__(
            f"network is not reversible; reactions without reverse partner: {list(self.unpaired)}"
        )


class OracleUnavailableError(CRNError):
    """The brute-force spanning tree oracle refused a component above its size cap."""


class NotFormallyBalancedError(CRNError):
    """Conductances requested for a network violating the weak Wegscheider conditions."""

    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"network is not formally balanced: {witness}")


class BoundaryApproachError(CRNError):
    """A trajectory left (or numerically touched) the boundary of the positive orthant.

    The partial trajectory up to the last positive state is kept on ``trajectory``.
    """

    def __init__(self, message: str, trajectory=None, boundary_proximity: float = 0.0):
        self.trajectory = trajectory
        self.boundary_proximity = boundary_proximity
        super().__init__(f"{message} (boundary proximity {boundary_proximity:.3g})")


class ConvergenceError(CRNError):
    """Iterative solver gave up; carries the last iterate and gradient norm."""

    def __init__(self, message: str, last_iterate=None, gradient_norm: float = float("nan")):
        self.last_iterate = last_iterate
        self.gradient_norm = gradient_norm
        super().__init__(f"{message} (gradient norm {gradient_norm:.3g})")
