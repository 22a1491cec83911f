"""Exception hierarchy shared by every module."""


class HammingShiftError(ValueError):
    """Base class for all errors raised by this package."""


class WidthMismatch(HammingShiftError):
    pass


class InvalidResidue(HammingShiftError):
    pass


class NotDivisible(HammingShiftError):
    pass


class OutOfRange(HammingShiftError):
    pass


class LengthMismatch(HammingShiftError):
    pass


class NonMaximalPattern(HammingShiftError):
    pass


class ParseError(HammingShiftError):
    """Raised for malformed textual inputs; ``field`` names the offender."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class InvalidLength(HammingShiftError):
    pass


class InfeasibleCarries(HammingShiftError):
    pass


class InfeasibleType(HammingShiftError):
    pass


class EmptyInput(HammingShiftError):
    pass


class NoEligibleBlocks(HammingShiftError):
    pass


class DegenerateEllipse(HammingShiftError):
    pass


class WrongTypes(HammingShiftError):
    pass


class DegenerateAlpha(HammingShiftError):
    pass


class TooWide(HammingShiftError):
    """Input exceeds a resource guard (exhaustive enumeration, exact DP)."""
