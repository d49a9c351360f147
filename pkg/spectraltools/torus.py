"""
Geometry of point sets on the torus T = R / 2piZ:
wrap-around distance, minimum separation and the
permutation-minimized l-infinity matching distance.
"""

import math
from dataclasses import dataclass
from itertools import permutations

import numpy as np
from numpy.typing import ArrayLike, NDArray

from spectraltools.constants import TORUS_SNAP_TOL
from spectraltools.errors import InvalidArgumentError

TWO_PI = 2 * math.pi


def canonicalize(values: ArrayLike) -> NDArray[np.float64]:
    """
    Map real values into [0, 2pi).

    Uses the floor-division remainder; results
    within ``TORUS_SNAP_TOL`` of 2pi snap to 0.

    Parameters
    ----------
    values
        Real scalar or array of radians.

    Returns
    -------
    NDArray[np.float64]
        Canonical representatives, same shape
        as the input.
    """
    arr = np.asarray(values, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError("Torus points must be finite.")
    out = np.mod(arr, TWO_PI)
    return np.where(TWO_PI - out < TORUS_SNAP_TOL, 0.0, out)


@dataclass(frozen=True, order=True)
class TorusPoint:
    """A point of T, stored as its representative in [0, 2pi)."""

    value: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", float(canonicalize(self.value)))

    def __add__(self, other: "TorusPoint | float") -> "TorusPoint":
        return TorusPoint(self.value + float(other))

    def __sub__(self, other: "TorusPoint | float") -> "TorusPoint":
        return TorusPoint(self.value - float(other))

    def __float__(self) -> float:
        return self.value

    def distance(self, other: "TorusPoint | float") -> float:
        return wrap_distance(self.value, float(other))


@dataclass(frozen=True)
class FrequencySet:
    """
    Strictly increasing, duplicate-free points of T.

    Build instances with :meth:`FrequencySet.from_values`,
    which canonicalizes and sorts arbitrary real input.
    The stored array is read-only.
    """

    values: NDArray[np.float64]

    def __post_init__(self) -> None:
        arr = np.array(self.values, dtype=np.float64).reshape(-1)
        if arr.size == 0:
            raise InvalidArgumentError("A FrequencySet needs at least one point.")
        if np.any(arr < 0) or np.any(arr >= TWO_PI):
            raise InvalidArgumentError(
                "FrequencySet values must lie in [0, 2pi); use from_values."
            )
        if np.any(np.diff(arr) <= 0):
            raise InvalidArgumentError(
                "FrequencySet values must be strictly increasing."
            )
        if arr.size > 1 and min_separation_of(arr) <= 0:
            raise InvalidArgumentError("FrequencySet points must be distinct.")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @classmethod
    def from_values(cls, values: ArrayLike) -> "FrequencySet":
        """Canonicalize, sort and wrap ``values``."""
        arr = canonicalize(np.atleast_1d(values))
        return cls(np.sort(arr))

    @property
    def points(self) -> tuple[TorusPoint, ...]:
        return tuple(TorusPoint(v) for v in self.values)

    def shifted(self, s: float) -> "FrequencySet":
        """Every point translated by ``s`` (modulation)."""
        return FrequencySet.from_values(self.values + s)

    def __len__(self) -> int:
        return int(self.values.size)

    def __iter__(self):
        return iter(self.points)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FrequencySet):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    def __hash__(self) -> int:
        return hash(self.values.tobytes())


def _as_values(x: "FrequencySet | ArrayLike") -> NDArray[np.float64]:
    if isinstance(x, FrequencySet):
        return x.values
    return np.sort(canonicalize(np.atleast_1d(x)))


def wrap_distance(u: ArrayLike, v: ArrayLike) -> NDArray[np.float64] | float:
    """
    Wrap-around distance |u - v|_T in [0, pi].

    Broadcasts over array input; scalar input
    returns a ``float``.

    Raises
    ------
    InvalidArgumentError
        If any input is not finite.
    """
    u_arr = np.asarray(u, dtype=np.float64)
    v_arr = np.asarray(v, dtype=np.float64)
    if not (np.all(np.isfinite(u_arr)) and np.all(np.isfinite(v_arr))):
        raise InvalidArgumentError(
            f"wrap_distance needs finite input; got {u!r} and {v!r}."
        )
    d = np.mod(np.abs(u_arr - v_arr), TWO_PI)
    d = np.minimum(d, TWO_PI - d)
    if d.ndim == 0:
        return float(d)
    return d


def min_separation_of(sorted_values: NDArray[np.float64]) -> float:
    # consecutive gaps plus the gap across 0
    if sorted_values.size < 2:
        return TWO_PI
    gaps = np.diff(sorted_values)
    wrap_gap = TWO_PI - sorted_values[-1] + sorted_values[0]
    return float(min(gaps.min(), wrap_gap))


def min_separation(x: "FrequencySet | ArrayLike") -> float:
    """
    Minimum pairwise wrap distance of a point set.

    A singleton has separation 2pi by convention,
    so it satisfies any separation bound.

    Parameters
    ----------
    x
        A :class:`FrequencySet` or real values
        (canonicalized and sorted first).

    Returns
    -------
    float
        The minimum separation Delta(x).
    """
    return min_separation_of(_as_values(x))


def matching_distance_inf(
    x: "FrequencySet | ArrayLike", y: "FrequencySet | ArrayLike"
) -> float:
    """
    Permutation-minimized l-infinity distance between
    two point sets of equal cardinality,

        min over bijections s of max_j |x_j - y_s(j)|_T.

    For circularly sorted sets the optimum is attained
    by a cyclic shift of the sorted order, so only the
    r shifts are evaluated.

    Raises
    ------
    InvalidArgumentError
        If the cardinalities differ.
    """
    xs = _as_values(x)
    ys = _as_values(y)
    if xs.size != ys.size:
        raise InvalidArgumentError(
            f"Point sets must have equal cardinality; got {xs.size} and {ys.size}."
        )
    r = xs.size
    shifts = (np.arange(r)[:, None] + np.arange(r)[None, :]) % r
    dists = wrap_distance(xs[None, :], ys[shifts])
    return float(dists.max(axis=1).min())


def matching_distance_bruteforce(
    x: "FrequencySet | ArrayLike", y: "FrequencySet | ArrayLike"
) -> float:
    """Full permutation search; exponential, intended as an oracle for small sets."""
    xs = _as_values(x)
    ys = _as_values(y)
    if xs.size != ys.size:
        raise InvalidArgumentError(
            f"Point sets must have equal cardinality; got {xs.size} and {ys.size}."
        )
    return min(
        float(np.max(wrap_distance(xs, ys[list(perm)])))
        for perm in permutations(range(ys.size))
    )
