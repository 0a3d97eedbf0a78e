"""Exception hierarchy shared by every phototactile module."""

from __future__ import annotations


class TactileError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(TactileError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class GeometryError(TactileError, ValueError):
    """Indentation incompatible with the body geometry."""


class SaturationError(TactileError):
    """The silicone surface closed the optical gap completely."""


class RangeError(TactileError, ValueError):
    """Value outside the validity range or image of an optical/calibration model."""


class InsufficientDataError(TactileError, ValueError):
    """Not enough distinct samples to fit the requested model."""


class DataError(TactileError, ValueError):
    """Input data cannot support the requested metric."""


class ParameterError(TactileError, ValueError):
    """A parameter violates its invariant.

    ``field`` names the offending parameter when known.
    """

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class SimulationError(TactileError):
    """A forward simulation left the model's valid operating region."""

    def __init__(self, message: str, time_s: float | None = None):
        super().__init__(message)
        self.time_s = time_s


class ConfigError(TactileError, ValueError):
    """Malformed or invalid configuration document."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field


class RangeWarning(UserWarning):
    """Emitted when an out-of-range value was clamped instead of rejected."""


class MonotonicityWarning(UserWarning):
    """Emitted when a fitted calibration curve is not monotone on its domain."""
