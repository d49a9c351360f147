"""
Gradient-MUSIC: estimate r frequencies from an
r-dimensional subspace of C^m that is close to a
Fourier subspace, by minimizing the MUSIC noise-space
objective with grid initialization followed by
gradient descent. Also holds rank detection by
singular value thresholding.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
import scipy.fft
from numpy.typing import ArrayLike, NDArray

from spectraltools.constants import (
    DEFAULT_ARMIJO_SHRINK,
    DEFAULT_ARMIJO_SLOPE,
    DEFAULT_EXCLUSION_FACTOR,
    DEFAULT_GRAD_TOL_FACTOR,
    DEFAULT_GRID_DENSITY,
    DEFAULT_MAX_ITERS,
    DEFAULT_RANK_THRESHOLD,
    MIN_GRID_DENSITY,
)
from spectraltools.errors import (
    EstimationError,
    InitializationError,
    InvalidArgumentError,
)
from spectraltools.structured_linalg import (
    OrthonormalBasis,
    ToeplitzMatrix,
    fourier_matrix,
    toeplitz_from_params,
)
from spectraltools.torus import (
    TWO_PI,
    FrequencySet,
    canonicalize,
    min_separation,
    wrap_distance,
)
from spectraltools.utils import as_complex_vector

logger = logging.getLogger(__name__)

# backtracking halvings before a descent is declared stalled
_MAX_BACKTRACKS = 60

# relative rounding level of q and t
_ROUNDOFF = 16 * np.finfo(np.float64).eps


@dataclass(frozen=True)
class GradientMusicConfig:
    """
    Tunables of the Gradient-MUSIC frequency estimator.

    Parameters
    ----------
    grid_density
        Grid points per interval of length 2pi/m.
    exclusion_radius
        Minimum wrap distance between two initializers.
        Defaults to 4pi/m when None.
    max_iters
        Gradient descent iteration budget per frequency.
    grad_tol
        Stop once |q'| falls below this. Defaults to
        1e-12 * m^2 when None.
    armijo_shrink
        Step reduction factor of the backtracking search.
    armijo_slope
        Sufficient decrease constant of the Armijo rule.
    """

    grid_density: int = DEFAULT_GRID_DENSITY
    exclusion_radius: float | None = None
    max_iters: int = DEFAULT_MAX_ITERS
    grad_tol: float | None = None
    armijo_shrink: float = DEFAULT_ARMIJO_SHRINK
    armijo_slope: float = DEFAULT_ARMIJO_SLOPE

    def __post_init__(self) -> None:
        if self.grid_density < MIN_GRID_DENSITY:
            raise InvalidArgumentError(
                f"grid_density must be at least {MIN_GRID_DENSITY};"
                f" got {self.grid_density}."
            )
        if self.exclusion_radius is not None and not self.exclusion_radius > 0:
            raise InvalidArgumentError(
                f"exclusion_radius must be positive; got {self.exclusion_radius}."
            )
        if self.max_iters < 1:
            raise InvalidArgumentError(
                f"max_iters must be at least 1; got {self.max_iters}."
            )
        if self.grad_tol is not None and not self.grad_tol > 0:
            raise InvalidArgumentError(
                f"grad_tol must be positive; got {self.grad_tol}."
            )
        if not 0 < self.armijo_shrink < 1:
            raise InvalidArgumentError(
                f"armijo_shrink must lie in (0, 1); got {self.armijo_shrink}."
            )
        if not 0 < self.armijo_slope < 1:
            raise InvalidArgumentError(
                f"armijo_slope must lie in (0, 1); got {self.armijo_slope}."
            )

    def resolved_exclusion_radius(self, m: int) -> float:
        if self.exclusion_radius is None:
            return DEFAULT_EXCLUSION_FACTOR / m
        return self.exclusion_radius

    def resolved_grad_tol(self, m: int) -> float:
        if self.grad_tol is None:
            return DEFAULT_GRAD_TOL_FACTOR * m**2
        return self.grad_tol

    def grid_size(self, m: int) -> int:
        return math.ceil(self.grid_density * m)


@dataclass(frozen=True)
class SpectralParams:
    """
    Frequencies and amplitudes of an exponential sum
    y_j = sum_k a_k exp(i j x_k).
    """

    x: FrequencySet
    a: NDArray[np.complex128]

    def __post_init__(self) -> None:
        amps = as_complex_vector(self.a, "a").copy()
        if amps.size != len(self.x):
            raise InvalidArgumentError(
                f"Need one amplitude per frequency; got {amps.size} and {len(self.x)}."
            )
        amps.setflags(write=False)
        object.__setattr__(self, "a", amps)

    @property
    def r(self) -> int:
        return len(self.x)

    def in_class(self, h: float, r: int) -> bool:
        """Membership in P(h, r): separation >= h, r points, 1 <= |a_j| <= 10."""
        moduli = np.abs(self.a)
        return bool(
            self.r == r
            and min_separation(self.x) >= h
            and np.all(moduli >= 1)
            and np.all(moduli <= 10)
        )

    def signal(self, n: int) -> NDArray[np.complex128]:
        """Noiseless samples Phi(n, x) a."""
        return fourier_matrix(n, self.x) @ self.a

    def toeplitz(self, n: int) -> ToeplitzMatrix:
        return toeplitz_from_params(n, self.x, self.a)


@dataclass(frozen=True)
class MusicLandscape:
    """The MUSIC objective attached to an orthonormal basis W of C^m."""

    W: OrthonormalBasis

    def __post_init__(self) -> None:
        if not self.W.dim < self.W.ambient:
            raise InvalidArgumentError(
                "The signal subspace must be a proper subspace;"
                f" got dimension {self.W.dim} in C^{self.W.ambient}."
            )

    @property
    def m(self) -> int:
        return self.W.ambient

    @property
    def r(self) -> int:
        return self.W.dim

    def curvature_bound(self) -> float:
        """(2/m) * sum_{j<m} j^2, a global bound on |q''|."""
        m = self.m
        return 2.0 / m * ((m - 1) * m * (2 * m - 1) / 6)


def _residuals(
    L: MusicLandscape, t: NDArray[np.float64]
) -> tuple[NDArray[np.complex128], NDArray[np.complex128]]:
    # columns phi(t) and rho(t) = phi(t) - W W^* phi(t)
    phi = np.exp(1j * np.outer(np.arange(L.m), t))
    W = L.W.basis
    rho = phi - W @ (W.conj().T @ phi)
    return phi, rho


def _objective_values(L: MusicLandscape, t: NDArray[np.float64]) -> NDArray[np.float64]:
    _, rho = _residuals(L, t)
    return np.sum(np.abs(rho) ** 2, axis=0) / L.m


def _objective_and_gradient(
    L: MusicLandscape, t: NDArray[np.float64]
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    phi, rho = _residuals(L, t)
    q = np.sum(np.abs(rho) ** 2, axis=0) / L.m
    dphi = 1j * np.arange(L.m)[:, None] * phi
    g = 2.0 / L.m * np.real(np.sum(dphi.conj() * rho, axis=0))
    return q, g


def _gradient_values(L: MusicLandscape, t: NDArray[np.float64]) -> NDArray[np.float64]:
    return _objective_and_gradient(L, t)[1]


def objective(L: MusicLandscape, t: float) -> float:
    """
    MUSIC noise-space function q(t) = |phi(t) - W W^* phi(t)|^2 / m,
    where phi(t) = (1, e^{it}, ..., e^{i(m-1)t}). Lies in [0, 1].
    """
    return float(_objective_values(L, np.array([t], dtype=np.float64))[0])


def objective_gradient(L: MusicLandscape, t: float) -> float:
    """Derivative q'(t) = (2/m) Re <phi'(t), rho(t)>."""
    return float(_gradient_values(L, np.array([t], dtype=np.float64))[0])


def grid_objective(
    L: MusicLandscape, grid_size: int
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """
    q on the uniform grid 2pi g / grid_size, evaluated for
    all grid points at once with one FFT per basis column.

    Returns
    -------
    tuple[NDArray[np.float64], NDArray[np.float64]]
        Grid points and objective values.
    """
    if grid_size < L.m:
        raise InvalidArgumentError(
            f"Grid of {grid_size} points is coarser than the dimension {L.m}."
        )
    # sum_j conj(W_jk) e^{i j t_g} for every grid point t_g
    coeffs = grid_size * scipy.fft.ifft(L.W.basis.conj(), n=grid_size, axis=0)
    energy = np.sum(np.abs(coeffs) ** 2, axis=1)
    values = np.clip((L.m - energy) / L.m, 0.0, 1.0)
    grid = TWO_PI * np.arange(grid_size) / grid_size
    return grid, values


def _greedy_select(
    candidates: NDArray[np.float64],
    count: int,
    radius: float,
    taken: list[float] | None = None,
) -> list[float]:
    # candidates are ordered by objective value
    chosen: list[float] = []
    blocked = list(taken) if taken else []
    for c in candidates:
        if len(chosen) == count:
            break
        if blocked and np.min(wrap_distance(c, np.asarray(blocked))) < radius:
            continue
        chosen.append(float(c))
        blocked.append(float(c))
    return chosen


def _ranked_grid(L: MusicLandscape, cfg: GradientMusicConfig) -> NDArray[np.float64]:
    grid, values = grid_objective(L, cfg.grid_size(L.m))
    return grid[np.argsort(values, kind="stable")]


def grid_initializers(
    L: MusicLandscape, r: int, cfg: GradientMusicConfig | None = None
) -> FrequencySet:
    """
    Pick r starting points from a uniform grid.

    Grid points are visited in increasing order of q;
    a point is skipped if it lies within the exclusion
    radius of an already selected one.

    Raises
    ------
    InitializationError
        If fewer than r admissible grid points exist.
    """
    if cfg is None:
        cfg = GradientMusicConfig()
    if r != L.r:
        raise InvalidArgumentError(
            f"Number of initializers must equal dim(W) = {L.r}; got {r}."
        )
    radius = cfg.resolved_exclusion_radius(L.m)
    chosen = _greedy_select(_ranked_grid(L, cfg), r, radius)
    if len(chosen) < r:
        raise InitializationError(
            f"Only {len(chosen)} of {r} admissible grid initializers at exclusion"
            f" radius {radius:.3e}; the subspace is far from any Fourier subspace."
        )
    return FrequencySet.from_values(chosen)


def _descend_batch(
    L: MusicLandscape,
    t0: ArrayLike,
    cfg: GradientMusicConfig,
    trace: list[NDArray[np.float64]] | None = None,
) -> NDArray[np.float64]:
    """
    Independent gradient descents from every entry of ``t0``,
    run together. Each point keeps its own Armijo step; the
    accepted objective values of every point are appended to
    ``trace`` (one array per iteration) when given.

    A point also stops once the decrease step * q'^2
    promised by a trial step falls below the rounding
    error of q, or the move falls below the resolution
    of t.
    """
    t = np.array(t0, dtype=np.float64).reshape(-1)
    if not np.all(np.isfinite(t)):
        raise InvalidArgumentError("Descent start points must be finite.")
    step0 = 1.0 / L.curvature_bound()
    tol = cfg.resolved_grad_tol(L.m)
    q, g = _objective_and_gradient(L, t)
    active = np.abs(g) > tol
    if trace is not None:
        trace.append(q.copy())
    iterations = 0
    stalled_total = 0
    while iterations < cfg.max_iters and active.any():
        iterations += 1
        idx = np.flatnonzero(active)
        step = np.full(idx.size, step0)
        pending = np.ones(idx.size, dtype=bool)
        stalled = np.zeros(idx.size, dtype=bool)
        for _ in range(_MAX_BACKTRACKS):
            sub = np.flatnonzero(pending)
            pts = idx[sub]
            decrease = step[sub] * g[pts] ** 2
            # rounding error of q grows like eps * sqrt(q)
            lost = (decrease <= _ROUNDOFF * np.sqrt(q[pts])) | (
                step[sub] * np.abs(g[pts]) <= _ROUNDOFF * TWO_PI
            )
            stalled[sub[lost]] = True
            pending[sub[lost]] = False
            sub, pts, decrease = sub[~lost], pts[~lost], decrease[~lost]
            if sub.size == 0:
                break
            candidate = t[pts] - step[sub] * g[pts]
            q_cand, g_cand = _objective_and_gradient(L, candidate)
            accepted = q_cand <= q[pts] - cfg.armijo_slope * decrease
            ok = pts[accepted]
            t[ok] = candidate[accepted]
            q[ok] = q_cand[accepted]
            g[ok] = g_cand[accepted]
            pending[sub[accepted]] = False
            step[sub[~accepted]] *= cfg.armijo_shrink
        stalled |= pending
        stalled_total += int(stalled.sum())
        active[idx[stalled]] = False
        moved = idx[~stalled]
        active[moved] = np.abs(g[moved]) > tol
        if trace is not None:
            trace.append(q.copy())
    logger.debug(
        "Gradient descent on %d point(s) stopped after %d iteration(s);"
        " %d stalled at rounding level, %d still above tolerance.",
        t.size,
        iterations,
        stalled_total,
        int(active.sum()),
    )
    return canonicalize(t)


def descend(L: MusicLandscape, t0: float, cfg: GradientMusicConfig | None = None) -> float:
    """
    Gradient descent on q from ``t0`` with Armijo backtracking.

    The trial step starts at 1 / L_hat with
    L_hat = (2/m) sum_{j<m} j^2 and shrinks by
    ``cfg.armijo_shrink`` until sufficient decrease holds.
    Stops when |q'| <= grad_tol or after ``cfg.max_iters``
    iterations; non-convergence is not an error.

    Returns
    -------
    float
        Final iterate in [0, 2pi).
    """
    if cfg is None:
        cfg = GradientMusicConfig()
    return float(_descend_batch(L, [t0], cfg)[0])


def estimate_frequencies(
    W: OrthonormalBasis, cfg: GradientMusicConfig | None = None
) -> FrequencySet:
    """
    Recover dim(W) frequencies from a subspace near a
    Fourier subspace.

    Runs :func:`grid_initializers`, descends from each
    initializer, and merges descents that end within half
    the exclusion radius of each other; every merge is
    replaced by a descent from the next admissible grid
    candidate.

    Parameters
    ----------
    W
        Orthonormal basis of an r-dimensional subspace of
        C^m with r < m.
    cfg
        Estimator configuration. Defaults to
        ``GradientMusicConfig()``.

    Returns
    -------
    FrequencySet
        Exactly r estimated frequencies.

    Raises
    ------
    InitializationError
        If the grid offers fewer than r initializers.
    EstimationError
        If merging leaves fewer than r distinct estimates.
    """
    if cfg is None:
        cfg = GradientMusicConfig()
    L = MusicLandscape(W)
    r = L.r
    radius = cfg.resolved_exclusion_radius(L.m)
    ranked = _ranked_grid(L, cfg)
    seeds = _greedy_select(ranked, r, radius)
    if len(seeds) < r:
        raise InitializationError(
            f"Only {len(seeds)} of {r} admissible grid initializers at exclusion"
            f" radius {radius:.3e}; the subspace is far from any Fourier subspace."
        )
    kept: list[float] = []
    kept_q: list[float] = []
    batch = seeds
    used = list(seeds)
    while True:
        refined = _descend_batch(L, batch, cfg)
        values = _objective_values(L, refined)
        for t, qt in sorted(zip(refined, values), key=lambda pair: pair[1]):
            if kept and np.min(wrap_distance(t, np.asarray(kept))) < radius / 2:
                continue
            kept.append(float(t))
            kept_q.append(float(qt))
        missing = r - len(kept)
        if missing == 0:
            break
        logger.debug("Re-seeding %d merged descent(s).", missing)
        batch = _greedy_select(ranked, missing, radius, taken=used + kept)
        if len(batch) < missing:
            raise EstimationError(
                f"Descents collapsed to {len(kept)} distinct frequencies"
                f" and only {len(batch)} re-seeding candidate(s) remain; need {r}."
            )
        used.extend(batch)
    return FrequencySet.from_values(kept)


def detect_rank(
    sigma: ArrayLike, scale: float, theta: float = DEFAULT_RANK_THRESHOLD
) -> int:
    """
    Count singular values at least ``theta * scale``.

    Parameters
    ----------
    sigma
        Non-increasing singular values.
    scale
        n for Toeplitz data, n/2 for the Hankel lift of a
        length-n signal.
    theta
        Threshold in (0, 1). Defaults to 1/4.

    Returns
    -------
    int
        The detected rank.
    """
    if not scale > 0:
        raise InvalidArgumentError(f"scale must be positive; got {scale}.")
    if not 0 < theta < 1:
        raise InvalidArgumentError(f"theta must lie in (0, 1); got {theta}.")
    s = np.asarray(sigma, dtype=np.float64)
    return int(np.count_nonzero(s >= theta * scale))
