from __future__ import annotations

import math
from datetime import datetime, timedelta, timezone
from typing import Union

import numpy as np
from isodate import Duration, datetime_isoformat, duration_isoformat
from numpy.typing import ArrayLike

from .exceptions import DomainError

DurationLike = Union[int, float, timedelta, Duration]


def sec_to_duration(value: DurationLike) -> str:
    if isinstance(value, (int, float)):
        value = timedelta(seconds=value)
    return duration_isoformat(value)


def utc_timestamp() -> str:
    return datetime_isoformat(datetime.now(timezone.utc))


def require_positive(name: str, value: float) -> float:
    """Returns ``value`` as a float, raising :class:`DomainError` unless it is finite and > 0."""
    value = float(value)
    if not math.isfinite(value) or value <= 0:
        raise DomainError(f"{name} must be positive and finite, got {value!r}")
    return value


def require_non_negative(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value < 0:
        raise DomainError(f"{name} must be non-negative and finite, got {value!r}")
    return value


def require_frequency(xi: ArrayLike) -> np.ndarray:
    """Imaginary frequencies (rad/s) as a float array; :class:`DomainError` unless all are finite and >= 0."""
    xi = np.asarray(xi, dtype=float)
    if np.any(~np.isfinite(xi)) or np.any(xi < 0):
        raise DomainError(f"imaginary frequency must be finite and >= 0, got {xi!r}")
    return xi


__all__ = [
    "DurationLike",
    "sec_to_duration",
    "utc_timestamp",
    "require_positive",
    "require_non_negative",
    "require_frequency",
]
