"""
Alternating projection (Cadzow-style) baseline for
low-rank Toeplitz approximation, alternating between
the best rank-r approximant and the nearest Toeplitz
matrix.
"""

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from spectraltools.constants import ALTPROJ_MAX_ITERS, ALTPROJ_STALL_REL_TOL
from spectraltools.errors import InvalidArgumentError
from spectraltools.structured_linalg import ToeplitzMatrix, low_rank_approximation
from spectraltools.utils import as_square_matrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AltProjConfig:
    """
    Stopping rule of :func:`alternating_projection`.

    Parameters
    ----------
    max_iters
        Iteration cap.
    stall_rel_tol
        Stop once consecutive iterates differ by less than
        this fraction of the Frobenius norm of the input.
    """

    max_iters: int = ALTPROJ_MAX_ITERS
    stall_rel_tol: float = ALTPROJ_STALL_REL_TOL

    def __post_init__(self) -> None:
        if self.max_iters < 1:
            raise InvalidArgumentError(
                f"max_iters must be at least 1; got {self.max_iters}."
            )
        if not self.stall_rel_tol > 0:
            raise InvalidArgumentError(
                f"stall_rel_tol must be positive; got {self.stall_rel_tol}."
            )


def project_toeplitz(M: ArrayLike) -> ToeplitzMatrix:
    """
    Frobenius-nearest Toeplitz matrix: every diagonal is
    replaced by its mean.
    """
    mat = as_square_matrix(M, "M")
    n = mat.shape[0]
    # diagonal offset j - k of every entry, shifted to 0..2n-2
    offsets = (np.arange(n)[:, None] - np.arange(n)[None, :] + n - 1).reshape(-1)
    counts = np.bincount(offsets, minlength=2 * n - 1)
    flat = mat.reshape(-1)
    sums = np.bincount(offsets, weights=flat.real, minlength=2 * n - 1) + 1j * np.bincount(
        offsets, weights=flat.imag, minlength=2 * n - 1
    )
    return ToeplitzMatrix(sums / counts)


def project_rank(M: ArrayLike, r: int) -> NDArray[np.complex128]:
    """Best rank-r Frobenius approximant (truncated SVD reconstruction)."""
    return low_rank_approximation(M, r)


def alternating_projection(
    M: ArrayLike,
    r: int,
    cfg: AltProjConfig | None = None,
    residuals: list[float] | None = None,
) -> ToeplitzMatrix:
    """
    Alternate rank-r and Toeplitz projections, Toeplitz last.

    Starts from the Toeplitz projection of ``M`` and
    iterates T_{k+1} = P_toeplitz(P_rank(T_k)) until
    ``cfg.max_iters`` iterations or until consecutive
    iterates differ by less than
    ``cfg.stall_rel_tol * |M|_F``.

    Parameters
    ----------
    M
        Observed square matrix.
    r
        Target rank.
    cfg
        Stopping rule. Defaults to ``AltProjConfig()``.
    residuals
        If given, receives |T_k - P_rank(T_k)|_F for each
        iterate that was projected.

    Returns
    -------
    ToeplitzMatrix
        The last iterate; exactly Toeplitz but in general
        not of rank r.
    """
    if cfg is None:
        cfg = AltProjConfig()
    mat = as_square_matrix(M, "M")
    reference = np.linalg.norm(mat)
    current = project_toeplitz(mat)
    current_dense = current.dense()
    for iteration in range(1, cfg.max_iters + 1):
        low_rank = project_rank(current_dense, r)
        if residuals is not None:
            residuals.append(float(np.linalg.norm(current_dense - low_rank)))
        following = project_toeplitz(low_rank)
        following_dense = following.dense()
        step = np.linalg.norm(following_dense - current_dense)
        current, current_dense = following, following_dense
        if step < cfg.stall_rel_tol * reference:
            logger.debug("Alternating projection stalled after %d iteration(s).", iteration)
            break
    return current
