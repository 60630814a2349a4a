"""Exception types raised across the package."""


class DataError(ValueError):
    """Input data cannot be used: malformed file, missing values, bad shape."""


class DegenerateFeatureError(DataError):
    """A feature column is constant, so it cannot be scaled to [-1, 1]."""


class DegenerateTargetError(DataError):
    """The target column is constant, so it cannot be standardized."""


class ConfigError(ValueError):
    """A configuration value is invalid or a configuration key is unknown."""


class EmptyMatchError(RuntimeError):
    """A rule's interval matches no training example."""


class NotFittedError(RuntimeError):
    """An operation needs a fitted object but got an unfitted one."""


class ModelFormatError(ValueError):
    """A persisted model file is malformed or structurally inconsistent."""


class ModelVersionError(ModelFormatError):
    """A persisted model file declares a format version this build cannot read."""


class DegenerateTestError(ValueError):
    """A statistical test has no usable observations (all differences zero)."""
