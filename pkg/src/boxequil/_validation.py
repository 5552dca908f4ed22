"""Small argument checks shared by the estimator and the CLI."""

import numbers

import numpy as np


def check_scalar(value, name, target_type=numbers.Real, min_val=None, max_val=None,
                 include_min=True, include_max=True):
    """Return ``value`` if it is a finite scalar of ``target_type`` within bounds."""
    if isinstance(value, bool) or not isinstance(value, target_type):
        raise TypeError(f"{name} must be {getattr(target_type, '__name__', target_type)}, "
                        f"got {type(value).__name__}")
    if not np.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    if min_val is not None:
        if value < min_val or (value == min_val and not include_min):
            bracket = "[" if include_min else "("
            raise ValueError(f"{name} must be in {bracket}{min_val}, ...; got {value!r}")
    if max_val is not None:
        if value > max_val or (value == max_val and not include_max):
            bracket = "]" if include_max else ")"
            raise ValueError(f"{name} must be in ..., {max_val}{bracket}; got {value!r}")
    return value


def as_1d_column(X):
    """Flatten a 1-D array or single-column matrix to floats."""
    from sklearn.utils.validation import check_array

    arr = check_array(X, ensure_2d=False, dtype=np.float64)
    if arr.ndim == 2:
        if arr.shape[1] != 1:
            raise ValueError(f"expected a single column, got shape {arr.shape}")
        arr = arr[:, 0]
    return arr
