"""
Gradient-MUSIC estimators for low-rank Toeplitz and
Hankel matrices and for Fourier subspaces of noisy
exponential sums.
"""

import logging
import math
import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np
import scipy.linalg
from numpy.typing import ArrayLike, NDArray

from spectraltools.constants import (
    DEFAULT_RANK_THRESHOLD,
    SUBSPACE_GUARANTEE_MIN_N,
    TOEPLITZ_GUARANTEE_MIN_N,
)
from spectraltools.errors import (
    GuaranteeRegimeWarning,
    IdentifiabilityError,
    InvalidArgumentError,
    NoSignalError,
)
from spectraltools.gradient_music import (
    GradientMusicConfig,
    detect_rank,
    estimate_frequencies,
)
from spectraltools.structured_linalg import (
    OrthonormalBasis,
    ToeplitzMatrix,
    fourier_matrix,
    hankel_generator,
    hankel_lift,
    leading_left_subspace,
    least_squares_inverse_apply,
    singular_values,
    toeplitz_from_params,
)
from spectraltools.torus import FrequencySet, min_separation
from spectraltools.utils import as_complex_vector, as_square_matrix

logger = logging.getLogger(__name__)

RankSpec = int | Literal["auto"] | None


@dataclass(frozen=True)
class ToeplitzEstimate:
    """
    Output of the Toeplitz estimator,
    T_hat = Phi(n, x_hat) diag(a_hat) Phi(n, x_hat)^*.
    """

    x_hat: FrequencySet
    a_hat: NDArray[np.complex128]
    T_hat: ToeplitzMatrix
    rank: int

    def dense(self) -> NDArray[np.complex128]:
        return self.T_hat.dense()


@dataclass(frozen=True)
class HankelEstimate:
    """
    Output of the Hankel estimator,
    H_hat = Phi(n, x_hat) diag(b_hat) Phi(n, x_hat)^T,
    stored by its anti-diagonal values h_0..h_{2n-2}.
    """

    x_hat: FrequencySet
    b_hat: NDArray[np.complex128]
    gen: NDArray[np.complex128]
    rank: int

    @property
    def n(self) -> int:
        return (self.gen.size + 1) // 2

    def dense(self) -> NDArray[np.complex128]:
        n = self.n
        return scipy.linalg.hankel(self.gen[:n], self.gen[n - 1 :])


@dataclass(frozen=True)
class SubspaceEstimate:
    """
    Output of the Fourier subspace estimator: the
    frequencies, an orthonormal basis of
    range(Phi(n, x_hat)) and least squares amplitudes.
    """

    x_hat: FrequencySet
    U_hat: OrthonormalBasis
    a_hat: NDArray[np.complex128]

    def signal(self) -> NDArray[np.complex128]:
        """Denoised samples Phi(n, x_hat) a_hat."""
        return fourier_matrix(self.U_hat.ambient, self.x_hat) @ self.a_hat


def recover_amplitudes(
    M: ArrayLike, x_hat: FrequencySet, transpose: bool = False
) -> NDArray[np.complex128]:
    """
    Amplitudes a_hat = diag(Phi_hat^+ M (Phi_hat^+)^*)
    with Phi_hat = Phi(n, x_hat). Only the diagonal is
    kept; the off-diagonal mass is discarded.

    Parameters
    ----------
    M
        Observed n x n matrix.
    x_hat
        Estimated frequencies.
    transpose
        Use (Phi_hat^+)^T in place of (Phi_hat^+)^*, which
        fits the Hankel class Phi diag(b) Phi^T.

    Returns
    -------
    NDArray[np.complex128]
        One amplitude per frequency.

    Raises
    ------
    IllConditionedError
        If Phi_hat is numerically rank deficient.
    """
    mat = as_square_matrix(M, "M")
    phi_hat = fourier_matrix(mat.shape[0], x_hat)
    left = least_squares_inverse_apply(phi_hat, mat)
    if transpose:
        return np.diag(least_squares_inverse_apply(phi_hat, left.T)).copy()
    # diag(X (Phi^+)^*) = conj(diag(Phi^+ X^*))
    return np.conj(np.diag(least_squares_inverse_apply(phi_hat, left.conj().T)))


def recover_amplitudes_from_column(
    M: ArrayLike, x_hat: FrequencySet
) -> NDArray[np.complex128]:
    """
    Least squares amplitudes from the first column of ``M``,
    which equals Phi(n, x) a plus the first column of the noise.
    """
    mat = as_square_matrix(M, "M")
    return least_squares_inverse_apply(fourier_matrix(mat.shape[0], x_hat), mat[:, 0])


def _resolve_rank(
    r: RankSpec, sigma_source: NDArray[np.complex128], scale: float, theta: float
) -> int:
    if r is None or r == "auto":
        sigma = singular_values(sigma_source)
        detected = detect_rank(sigma, scale, theta)
        logger.debug(
            "Detected rank %d at threshold %.3g (scale %.3g).", detected, theta, scale
        )
        if detected == 0:
            raise NoSignalError(
                f"No singular value reaches {theta} * {scale:g};"
                f" largest is {sigma[0]:.3e}."
            )
        return detected
    if isinstance(r, bool) or not isinstance(r, int | np.integer):
        raise TypeError(f"Rank must be an integer or 'auto'; got {r!r}.")
    if r < 1:
        raise InvalidArgumentError(f"Rank must be at least 1; got {r}.")
    return int(r)


def _warn_outside_regime(
    n: int, min_n: int, x_hat: FrequencySet, min_sep: float, label: str
) -> None:
    if n < min_n:
        warnings.warn(
            f"{label}: n = {n} is below {min_n}; the error guarantee does not apply.",
            GuaranteeRegimeWarning,
            stacklevel=3,
        )
    if len(x_hat) > 1 and min_separation(x_hat) < min_sep:
        warnings.warn(
            f"{label}: estimated separation {min_separation(x_hat):.3e} is below"
            f" {min_sep:.3e}; the data may lie outside the guaranteed class.",
            GuaranteeRegimeWarning,
            stacklevel=3,
        )


def _matrix_frequencies(
    mat: NDArray[np.complex128],
    r: RankSpec,
    cfg: GradientMusicConfig | None,
    theta: float,
) -> tuple[FrequencySet, int]:
    # leading left singular subspace of mat -> Gradient-MUSIC
    if cfg is None:
        cfg = GradientMusicConfig()
    n = mat.shape[0]
    rank = _resolve_rank(r, mat, float(n), theta)
    if rank >= n:
        raise InvalidArgumentError(f"Rank must be below n = {n}; got {rank}.")
    left = leading_left_subspace(mat, rank)
    return estimate_frequencies(left, cfg), rank


def toeplitz_estimate(
    M: ArrayLike,
    r: RankSpec = "auto",
    cfg: GradientMusicConfig | None = None,
    theta: float = DEFAULT_RANK_THRESHOLD,
    amplitudes: Literal["diagonal", "column"] = "diagonal",
) -> ToeplitzEstimate:
    """
    Gradient-MUSIC Toeplitz estimator.

    Takes the leading r-dimensional left singular subspace
    of ``M``, estimates frequencies from it, recovers the
    amplitudes and assembles the rank-r Toeplitz matrix
    Phi(n, x_hat) diag(a_hat) Phi(n, x_hat)^*.

    Parameters
    ----------
    M
        Observed n x n matrix, T + E.
    r
        Target rank, or ``"auto"`` to count singular
        values of ``M`` at least ``theta * n``.
    cfg
        Gradient-MUSIC configuration. Defaults to
        ``GradientMusicConfig()``.
    theta
        Rank detection threshold. Defaults to 1/4.
    amplitudes
        ``"diagonal"`` keeps diag(Phi^+ M (Phi^+)^*);
        ``"column"`` fits the first column of ``M``.

    Returns
    -------
    ToeplitzEstimate
        Frequencies, amplitudes and the estimate.

    Raises
    ------
    NoSignalError
        If automatic rank detection finds rank 0.
    EstimationError
        If the frequency estimator fails.
    """
    mat = as_square_matrix(M, "M")
    n = mat.shape[0]
    x_hat, rank = _matrix_frequencies(mat, r, cfg, theta)
    _warn_outside_regime(n, TOEPLITZ_GUARANTEE_MIN_N, x_hat, 8 * math.pi / n, "Toeplitz")
    if amplitudes == "diagonal":
        a_hat = recover_amplitudes(mat, x_hat)
    elif amplitudes == "column":
        a_hat = recover_amplitudes_from_column(mat, x_hat)
    else:
        raise InvalidArgumentError(
            f"amplitudes must be 'diagonal' or 'column'; got {amplitudes!r}."
        )
    return ToeplitzEstimate(
        x_hat=x_hat,
        a_hat=a_hat,
        T_hat=toeplitz_from_params(n, x_hat, a_hat),
        rank=rank,
    )


def hankel_estimate(
    M: ArrayLike,
    r: RankSpec = "auto",
    cfg: GradientMusicConfig | None = None,
    theta: float = DEFAULT_RANK_THRESHOLD,
) -> HankelEstimate:
    """
    Gradient-MUSIC estimator for the Hankel class
    Phi(n, x) diag(b) Phi(n, x)^T.

    Frequencies come from the left singular subspace of
    M, which is also that of M J, whose Toeplitz part is
    H J. The amplitudes are diag(Phi_hat^+ M (Phi_hat^+)^T).
    Both agree with running :func:`toeplitz_estimate` on
    M J and mapping its amplitudes back with
    b_k = a_k exp(-i (n - 1) x_k).

    Returns
    -------
    HankelEstimate
        Estimate with constant anti-diagonals and rank r.
    """
    mat = as_square_matrix(M, "M")
    n = mat.shape[0]
    x_hat, rank = _matrix_frequencies(mat, r, cfg, theta)
    _warn_outside_regime(n, TOEPLITZ_GUARANTEE_MIN_N, x_hat, 8 * math.pi / n, "Hankel")
    b_hat = recover_amplitudes(mat, x_hat, transpose=True)
    gen = hankel_generator(n, x_hat.values, b_hat)
    return HankelEstimate(x_hat=x_hat, b_hat=b_hat, gen=gen, rank=rank)


def fourier_subspace_estimate(
    y_obs: ArrayLike,
    r: RankSpec = "auto",
    cfg: GradientMusicConfig | None = None,
    theta: float = DEFAULT_RANK_THRESHOLD,
) -> SubspaceEstimate:
    """
    Gradient-MUSIC Fourier subspace estimator.

    Lifts the samples into the ceil(n/2) x (n - ceil(n/2) + 1)
    Hankel matrix, feeds its leading left singular subspace
    to Gradient-MUSIC and returns range(Phi(n, x_hat)).

    Parameters
    ----------
    y_obs
        Noisy samples Phi(n, x) a + z.
    r
        Number of frequencies, or ``"auto"`` to threshold
        the Hankel singular values at ``theta * n / 2``.
    cfg
        Gradient-MUSIC configuration.
    theta
        Rank detection threshold.

    Returns
    -------
    SubspaceEstimate
        Frequencies, orthonormal basis and amplitudes.

    Raises
    ------
    IdentifiabilityError
        If the Hankel lift has no more rows than r,
        i.e. n < 2r + 1.
    """
    if cfg is None:
        cfg = GradientMusicConfig()
    y = as_complex_vector(y_obs, "y_obs")
    n = y.size
    if r not in (None, "auto") and isinstance(r, int | np.integer) and n < 2 * r:
        raise IdentifiabilityError(f"Need n >= 2r samples; got n = {n}, r = {r}.")
    H = hankel_lift(y)
    m = H.shape[0]
    rank = _resolve_rank(r, H, n / 2, theta)
    if rank >= m:
        raise IdentifiabilityError(
            f"Rank {rank} leaves no noise subspace in the {m}-row Hankel lift;"
            f" need n >= 2r + 1, got n = {n}."
        )
    left = leading_left_subspace(H, rank)
    x_hat = estimate_frequencies(left, cfg)
    _warn_outside_regime(n, SUBSPACE_GUARANTEE_MIN_N, x_hat, 16 * math.pi / n, "Subspace")
    phi_hat = fourier_matrix(n, x_hat)
    return SubspaceEstimate(
        x_hat=x_hat,
        U_hat=OrthonormalBasis.from_columns(phi_hat),
        a_hat=least_squares_inverse_apply(phi_hat, y),
    )
