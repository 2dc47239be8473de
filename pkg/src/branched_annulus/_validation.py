"""Input validation helpers shared by the estimator and the CLI."""
from __future__ import annotations

import numbers

import numpy as np

from .errors import InputError
from .poly import Polynomial, polynomial_from_coefficients, polynomial_from_roots


def _as_complex_vector(X, what: str) -> np.ndarray:
    try:
        arr = np.asarray(X)
    except ValueError as exc:
        raise InputError(f"{what}: ragged input") from exc
    if arr.dtype == object:
        try:
            arr = arr.astype(complex)
        except (TypeError, ValueError) as exc:
            raise InputError(f"{what}: entries must be numbers") from exc
    if arr.ndim == 2 and arr.shape[1] == 2 and not np.iscomplexobj(arr):
        # [re, im] pairs
        arr = arr[:, 0] + 1j * arr[:, 1]
    if arr.ndim != 1:
        raise InputError(f"{what}: expected a 1-d sequence or [re, im] pairs, got shape {arr.shape}")
    if not (np.issubdtype(arr.dtype, np.number) or arr.dtype == bool):
        raise InputError(f"{what}: entries must be numbers")
    arr = arr.astype(complex)
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{what}: entries must be finite")
    return arr


def check_coefficients(X) -> Polynomial:
    """Polynomial from ascending coefficients (complex, or [re, im] pairs)."""
    if isinstance(X, Polynomial):
        return X
    return polynomial_from_coefficients(_as_complex_vector(X, "coefficients"))


def check_roots(leading, roots) -> Polynomial:
    if not isinstance(leading, numbers.Number):
        lead = _as_complex_vector([leading], "leading")[0]
    else:
        lead = complex(leading)
    return polynomial_from_roots(lead, _as_complex_vector(roots, "roots"))


def check_points(Z) -> np.ndarray:
    """Complex evaluation points, flattened."""
    try:
        arr = np.asarray(Z, dtype=complex).reshape(-1)
    except (TypeError, ValueError) as exc:
        raise InputError("points: entries must be numbers") from exc
    if not np.all(np.isfinite(arr)):
        raise InputError("points: entries must be finite")
    return arr
