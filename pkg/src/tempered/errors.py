"""Exception hierarchy shared by every module."""


class TemperedError(Exception):
    """Base class for domain errors (CLI exit status 1)."""


class SpecMismatch(TemperedError):
    pass


class WindowError(TemperedError):
    """An operation would read or write outside the exact window."""


class NotDivisible(TemperedError):
    pass


class DivergentSubstitution(TemperedError):
    pass


class PresentationDefect(TemperedError):
    """A residue-ring Koszul solve failed, or a correction did not shrink."""


class RelationError(TemperedError):
    pass


class FormatError(Exception):
    """Malformed input text (CLI exit status 2)."""
