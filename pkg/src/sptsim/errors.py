"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid sizes, sites, presets or config-file contents."""


class NumericalError(ValueError):
    """A matrix failed a numerical validation (e.g. unitarity)."""


class ScheduleError(ValueError):
    """Interpolation parameter or Trotter schedule out of range."""


class ResourceError(MemoryError):
    """Requested dense object would be too large."""
