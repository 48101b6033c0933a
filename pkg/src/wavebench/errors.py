"""Exception taxonomy shared across the package."""


class WavebenchError(Exception):
    """Base class for all package errors."""


class ConfigurationError(WavebenchError, ValueError):
    """Invalid parameter or parameter combination."""


class FramingError(WavebenchError, ValueError):
    """Signal or bit-stream length inconsistent with the configured framing."""


class MeasurementError(WavebenchError, ValueError):
    """A measurement cannot be made on the given input."""


class ValidationError(WavebenchError, ValueError):
    """Scenario file failed schema validation.

    The message names the offending field path.
    """
