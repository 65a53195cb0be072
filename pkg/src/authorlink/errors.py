"""Exception types shared across the package."""


class AuthorlinkError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(AuthorlinkError, ValueError):
    """Invalid configuration value or unknown option."""


class ParseError(AuthorlinkError):
    """A data file could not be parsed; the message names file and line."""


class IntegrityError(AuthorlinkError):
    """A dataset invariant was violated (duplicate ids, dangling refs, ...)."""


class DataError(AuthorlinkError):
    """A dataset is unusable for the requested operation (empty, too small)."""


class SchemaMismatchError(AuthorlinkError):
    """A persisted artifact is incompatible with the current feature schema."""


class NumericFaultError(AuthorlinkError):
    """A numeric computation produced non-finite intermediate values."""
