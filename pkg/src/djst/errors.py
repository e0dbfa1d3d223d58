"""Exception and warning types raised across the package."""


class DJSTError(Exception):
    """Base class for all package errors."""


class ValidationError(DJSTError, ValueError):
    """Invalid hyperparameters, configuration or input data."""


class AllSessionsEmpty(ValidationError):
    pass


class EmptyDocument(ValidationError):
    pass


class ConflictingEntry(ValidationError):
    def __init__(self, word):
        super().__init__(f"word {word!r} listed as both positive and negative")
        self.word = word


class DimensionMismatch(ValidationError):
    pass


class EmptyHistory(DJSTError):
    pass


class NoData(DJSTError):
    pass


class NothingComparable(ValidationError):
    pass


class EmptySessionWarning(UserWarning):
    pass
