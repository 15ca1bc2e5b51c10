"""Exception hierarchy shared by all modules."""
from __future__ import annotations


class MorseError(Exception):
    """Base class for every error raised by openmorse."""


class EmptyGenerator(MorseError, ValueError):
    pass


class DuplicateVertex(MorseError, ValueError):
    pass


class NotSubcomplex(MorseError, ValueError):
    pass


class NotInK(MorseError, ValueError):
    pass


class CyclicField(MorseError, ValueError):
    pass


class MalformedField(MorseError, ValueError):
    pass


class DimensionMismatch(MorseError, ValueError):
    pass


class NotMorse(MorseError, ValueError):
    def __init__(self, cell, condition: str, message: str = ""):
        self.cell = cell
        self.condition = condition
        super().__init__(message or f"{condition} violated at {cell}")


class PresetConflict(MorseError, ValueError):
    pass


class NotAComplex(MorseError, ValueError):
    pass


class InfeasibleConstraint(MorseError, RuntimeError):
    pass


class GlobalCycle(MorseError, RuntimeError):
    pass


class StuckCell(MorseError, RuntimeError):
    def __init__(self, cell, threshold: float):
        self.cell = cell
        self.threshold = threshold
        super().__init__(f"cell {cell} cannot be eliminated at threshold {threshold}")


class NonElementaryStep(MorseError, RuntimeError):
    pass


class ParseError(MorseError, ValueError):
    def __init__(self, message: str, locus: str = ""):
        self.locus = locus
        super().__init__(f"{locus}: {message}" if locus else message)
