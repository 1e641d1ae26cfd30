"""Error types raised across the lab."""


class FogError(Exception):
    """Base class for every lab-specific failure."""


class ConfigError(FogError, ValueError):
    """Run configuration could not be resolved or validated."""


class SchemaError(FogError, ValueError):
    """A transition or array does not match the declared buffer schema."""


class EmptyBufferError(FogError, ValueError):
    """Sampling was requested from a buffer with no live items."""


class UnknownIndexError(FogError, KeyError):
    """An insert_index that was never pushed or has been evicted."""


class ParameterRangeError(FogError, ValueError):
    """A numeric parameter lies outside its admissible range."""


class StaleCacheError(FogError, RuntimeError):
    """backward() called without a matching forward() cache."""


class NonFiniteError(FogError, ArithmeticError):
    """NaN or inf reached a loss, gradient, state or TD error."""


class MaxDepthError(FogError, RuntimeError):
    """Expansion requested on a critic already at its maximal depth."""


class CheckpointFormatError(FogError, ValueError):
    """A checkpoint or snapshot file has the wrong magic, version or size."""
