"""Exception types shared across the library."""


class HolonetError(Exception):
    """Base class for every error raised by this package."""


class CycleDetected(HolonetError):
    """Cover relations close into a cycle, violating antisymmetry."""


class Disconnected(HolonetError):
    """The comparability graph of the poset is not connected."""


class NotComposable(HolonetError):
    """Path endpoints do not match."""


class UnknownGenerator(HolonetError):
    """Generator index or 1-simplex not present in the presentation."""


class WordNotReducible(HolonetError):
    """A word contains a letter outside the recorded elimination log."""


class NotSquare(HolonetError):
    """Operation requires a square matrix."""


class NotUnitary(HolonetError):
    """Matrix is not unitary within the working tolerance."""


class ClosureBoundExceeded(HolonetError):
    """Group closure exceeded its element bound (infinite or too large)."""


class DimensionMismatch(HolonetError):
    """Matrix shapes are inconsistent."""


class NotSubgroup(HolonetError):
    """Claimed subgroup has an element outside the ambient group."""


class InvalidCocycle(HolonetError):
    """Cocycle fails the 1-cocycle law; carries the validation report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotInNormalizer(HolonetError):
    """A value fails to normalize the fiber group."""


class RelationNotInFiber(HolonetError):
    """A relation word does not evaluate into the fiber, so the
    quotient-valued data is not well defined."""


class SearchSpaceTooLarge(HolonetError):
    """Backtracking search space exceeds the configured budget."""


class SizeCapExceeded(HolonetError):
    """Requested tensor-power size exceeds the configured cap."""


class ParseError(HolonetError):
    """Input document is malformed."""
