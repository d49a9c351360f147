"""
A collection of validation and coercion helpers
used across other spectraltools code.
"""

from collections.abc import Iterable, MutableSequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from spectraltools.errors import InvalidArgumentError


def validate_input_type(value: any, expected_type: type | tuple[type], param_name: str):
    """Checks the type of a variable and
    raises a TypeError if it does not match
    the expected type."""
    if isinstance(expected_type, tuple):
        if not any(isinstance(value, t) for t in expected_type):
            raise TypeError(
                f"Parameter '{param_name}' must be one of the types"
                f" {expected_type}; got {type(value)}."
            )
    else:
        if not isinstance(value, expected_type):
            raise TypeError(
                f"Parameter '{param_name}' must be of type"
                f" '{expected_type.__name__}'; got {type(value)}."
            )


def validate_iter_has_expected_types(
    iterable: Iterable, expected_type: type, param_name: str
):
    """
    Check if all elements in the iterable are
    instances of expected_type. If not, raise
    a TypeError.
    """
    if not all(isinstance(item, expected_type) for item in iterable):
        raise TypeError(
            f"All items in '{param_name}' must be of type '{expected_type.__name__}'."
        )


def ensure_listlike(x):
    """
    Ensure that an object either behaves like a
    :class:`MutableSequence` and if not return a
    one-item :class:`list` containing the object.

    Parameters
    ----------
    x
        The item to ensure is :class:`list`-like.

    Returns
    -------
    MutableSequence
        ``x`` if ``x`` is a :class:`MutableSequence`
        otherwise ``[x]``.
    """
    return x if isinstance(x, MutableSequence) else [x]


def validate_positive_int(value: int, param_name: str, minimum: int = 1) -> int:
    """Checks that ``value`` is an integer no smaller than ``minimum``."""
    if isinstance(value, bool) or not isinstance(value, int | np.integer):
        raise TypeError(
            f"Parameter '{param_name}' must be an integer; got {type(value)}."
        )
    if value < minimum:
        raise InvalidArgumentError(
            f"Parameter '{param_name}' must be at least {minimum}; got {value}."
        )
    return int(value)


def as_complex_matrix(value: ArrayLike, param_name: str) -> NDArray[np.complex128]:
    """
    Coerce ``value`` into a two-dimensional complex
    array with finite entries.

    Parameters
    ----------
    value
        Anything :func:`numpy.asarray` accepts.
    param_name
        Name used in error messages.

    Returns
    -------
    NDArray[np.complex128]
        The coerced matrix (a view when no copy
        is needed).
    """
    arr = np.asarray(value, dtype=np.complex128)
    if arr.ndim != 2:
        raise InvalidArgumentError(
            f"Parameter '{param_name}' must be a 2-D matrix; got shape {arr.shape}."
        )
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError(
            f"Parameter '{param_name}' must have finite entries."
        )
    return arr


def as_complex_vector(value: ArrayLike, param_name: str) -> NDArray[np.complex128]:
    """Coerce ``value`` into a one-dimensional finite complex array."""
    arr = np.asarray(value, dtype=np.complex128)
    if arr.ndim != 1:
        raise InvalidArgumentError(
            f"Parameter '{param_name}' must be a 1-D sequence; got shape {arr.shape}."
        )
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError(
            f"Parameter '{param_name}' must have finite entries."
        )
    return arr


def as_square_matrix(value: ArrayLike, param_name: str) -> NDArray[np.complex128]:
    """Like :func:`as_complex_matrix`, additionally requiring a square shape."""
    arr = as_complex_matrix(value, param_name)
    if arr.shape[0] != arr.shape[1]:
        raise InvalidArgumentError(
            f"Parameter '{param_name}' must be square; got shape {arr.shape}."
        )
    return arr
