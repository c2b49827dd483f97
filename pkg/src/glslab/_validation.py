"""Small argument checks shared by the public functions.

Every helper raises ``ValueError`` (or ``TypeError`` for wrong kinds) with a
message naming the offending argument, so callers never need to wrap them.
"""

from __future__ import annotations

import math
from numbers import Integral, Real

import numpy as np


def check_int(value, name: str, *, minimum: int | None = None, maximum: int | None = None) -> int:
    """Return ``value`` as ``int`` after checking type and range."""
    if isinstance(value, bool) or not isinstance(value, (Integral, np.integer)):
        raise TypeError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if minimum is not None and value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    if maximum is not None and value > maximum:
        raise ValueError(f"{name} must be <= {maximum}, got {value}")
    return value


def check_real(
    value,
    name: str,
    *,
    lower: float | None = None,
    upper: float | None = None,
    lower_open: bool = False,
    upper_open: bool = False,
    allow_inf: bool = False,
) -> float:
    """Return ``value`` as ``float`` after checking it lies in the given interval."""
    if isinstance(value, bool) or not isinstance(value, (Real, np.floating, np.integer)):
        raise TypeError(f"{name} must be a real number, got {value!r}")
    value = float(value)
    if math.isnan(value):
        raise ValueError(f"{name} must not be NaN")
    if math.isinf(value) and not allow_inf:
        raise ValueError(f"{name} must be finite, got {value}")
    if lower is not None:
        if value < lower or (lower_open and value == lower):
            op = ">" if lower_open else ">="
            raise ValueError(f"{name} must be {op} {lower}, got {value}")
    if upper is not None:
        if value > upper or (upper_open and value == upper):
            op = "<" if upper_open else "<="
            raise ValueError(f"{name} must be {op} {upper}, got {value}")
    return value


def check_vector(values, name: str, *, length: int | None = None, finite: bool = True) -> np.ndarray:
    """Return a 1-D float array copy of ``values``."""
    arr = np.array(values, dtype=float, copy=True)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if length is not None and arr.size != length:
        raise ValueError(f"{name} must have length {length}, got {arr.size}")
    if finite and not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must contain only finite values")
    return arr


def check_increasing(values, name: str, *, strict: bool = True) -> np.ndarray:
    """Return ``values`` as a float array after checking it is increasing."""
    arr = check_vector(values, name)
    if arr.size == 0:
        raise ValueError(f"{name} must be nonempty")
    steps = np.diff(arr)
    if strict and np.any(steps <= 0):
        raise ValueError(f"{name} must be strictly increasing")
    if not strict and np.any(steps < 0):
        raise ValueError(f"{name} must be nondecreasing")
    return arr


def is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0
