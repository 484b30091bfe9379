"""Exception types shared across phaselab."""


class PhaselabError(Exception):
    """Base class for all phaselab errors."""


class InvalidWordError(PhaselabError, ValueError):
    pass


class AlphabetMismatchError(PhaselabError, ValueError):
    pass


class ResourceLimitError(PhaselabError):
    """Raised when a request would enumerate more words than the configured cap."""


class UnsupportedOperationError(PhaselabError):
    pass


class CoverageError(PhaselabError, KeyError):
    """A finite bijection was queried outside the rank window it covers."""

    def __str__(self):
        return Exception.__str__(self)


class ConstructionError(PhaselabError):
    pass


class UndefinedFractionError(PhaselabError, ZeroDivisionError):
    pass


class InsufficientDataError(PhaselabError):
    pass


class NotApplicableError(PhaselabError):
    pass


class NoPredictionError(PhaselabError, LookupError):
    pass


class DeviceError(PhaselabError):
    pass
