class ShapeError(ValueError):
    """Matrix or vector dimensions are incompatible."""


class NotEssentialError(ValueError):
    """Matrix is not square, has a negative entry, or has a zero row."""


class MatrixMismatchError(ValueError):
    """Two dimension-group elements have different defining matrices."""


class NotIntertwinerError(ValueError):
    """The relation AR = RB fails."""

    def __init__(self, residual, message="AR != RB"):
        super().__init__(message)
        self.residual = residual


class NotAHomomorphismError(ValueError):
    """Generator images do not define a Z[x, x^-1]-module homomorphism."""


class SinkError(ValueError):
    """A graph vertex emits no edges."""

    def __init__(self, vertex):
        super().__init__(f"vertex {vertex!r} is a sink")
        self.vertex = vertex


class ParseError(ValueError):
    """Malformed graph, matrix or witness input."""
