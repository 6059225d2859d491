"""Exception types raised across the package."""


class HopfieldError(Exception):
    """Base class for all package errors."""


class DimensionError(HopfieldError, ValueError):
    pass


class DomainError(HopfieldError, ValueError):
    """A value lies outside the alphabet the operation accepts."""


class ParameterError(HopfieldError, ValueError):
    pass


class InputError(HopfieldError, ValueError):
    pass


class CapacityError(HopfieldError, ValueError):
    """More patterns requested for one network than it has nodes."""


class TrainingError(HopfieldError, RuntimeError):
    pass


class FormatError(HopfieldError, ValueError):
    """Unsupported magic number or format version."""


class ParseError(HopfieldError, ValueError):
    """Malformed file contents.

    ``offset`` is the byte offset at which parsing failed, when known.
    """

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class CorruptionError(HopfieldError, ValueError):
    """Checksum mismatch on a bank file."""


class ConfigError(HopfieldError, ValueError):
    """Bad experiment config; the message names the offending line or key."""
