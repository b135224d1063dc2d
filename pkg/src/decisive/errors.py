"""Exception types shared across the package."""


class DecisiveError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInstanceError(DecisiveError):
    """The input violates a structural precondition (bad sizes, bad indices)."""


class SizeLimitError(DecisiveError):
    """An operation refused to run because a configured cap was exceeded."""


class InputFormatError(DecisiveError):
    """A file or assignment could not be parsed or is missing entries."""
