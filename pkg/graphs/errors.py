"""Exceptions raised by the plane-graph layer."""
from typing import Optional


class PlaneGraphError(ValueError):
    """Base class for invalid plane graphs and invalid arguments about them."""


class SymmetryViolation(PlaneGraphError):
    """``u`` is listed around ``v`` but ``v`` is not listed around ``u``."""


class NotSimple(PlaneGraphError):
    """A rotation repeats a neighbour, contains a loop, or labels collide."""


class UnknownLabel(PlaneGraphError):
    """A rotation or a command-line argument references an undeclared label."""


class NotPlane(PlaneGraphError):
    """The rotation system violates Euler's formula on some component."""


class NoSuchFace(PlaneGraphError):
    """No face of the graph is bounded by the requested walk."""


class NotACycle(PlaneGraphError):
    """A vertex sequence is not a cycle of the graph."""


class NotAnElevenFace(PlaneGraphError):
    """Ear and collapse operations need an 11-face bounded by a cycle."""


class NotACycleBoundary(PlaneGraphError):
    """Claw detection needs a face whose boundary is a cycle."""


class NotElevenCycle(PlaneGraphError):
    """Special-cycle detection needs a cycle of length 11."""


class MalformedInput(PlaneGraphError):
    """A text file could not be parsed.

    Attributes:
        line: 1-based line of the offending token.
        column: 1-based column of the offending token.
    """

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(f"{where}{message}")
