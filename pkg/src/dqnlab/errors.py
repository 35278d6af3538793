"""Exception hierarchy shared across the package."""


class DqnLabError(Exception):
    """Base class for all dqnlab errors."""


class ShapeError(DqnLabError):
    """Array or layer dimensions do not line up."""


class ConfigError(DqnLabError):
    """A configuration value or parameter is out of range."""


class DataError(DqnLabError):
    """Market data failed validation (schema, ordering, values)."""


class InsufficientDataError(DqnLabError):
    """Not enough stored items to satisfy a request."""


class EpisodeOverError(DqnLabError):
    """step() called on an environment whose episode already ended."""


class CheckpointError(DqnLabError):
    """Checkpoint document is malformed or internally inconsistent."""


class CheckpointVersionError(CheckpointError):
    """Checkpoint document carries an unsupported version."""


class CompatibilityError(DqnLabError):
    """Checkpoint shape does not match the target environment."""
