"""
Fourier, Toeplitz and Hankel matrices, the lifting
operators that build them from sequences, and the
dense linear algebra the estimators rely on:
truncated SVD, pseudoinverse application, sin-theta
distances between subspaces and the eps-rank.
"""

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from numpy.typing import ArrayLike, NDArray

from spectraltools.constants import ORTHONORMAL_TOL, PINV_RCOND
from spectraltools.errors import IllConditionedError, InvalidArgumentError
from spectraltools.torus import FrequencySet
from spectraltools.utils import (
    as_complex_matrix,
    as_complex_vector,
    validate_positive_int,
)


@dataclass(frozen=True)
class ToeplitzMatrix:
    """
    An n x n Toeplitz matrix stored by its generating
    sequence ``gen = (t_{-n+1}, ..., t_{n-1})``, so that
    the entry (j, k) is ``gen[j - k + n - 1]``.
    """

    gen: NDArray[np.complex128]

    def __post_init__(self) -> None:
        gen = as_complex_vector(self.gen, "gen").copy()
        if gen.size % 2 == 0:
            raise InvalidArgumentError(
                f"A Toeplitz generating sequence has odd length 2n-1; got {gen.size}."
            )
        gen.setflags(write=False)
        object.__setattr__(self, "gen", gen)

    @property
    def n(self) -> int:
        return (self.gen.size + 1) // 2

    def coefficient(self, d: int) -> complex:
        """The diagonal value t_d for -n < d < n."""
        if not -self.n < d < self.n:
            raise InvalidArgumentError(
                f"Diagonal offset must lie in ({-self.n}, {self.n}); got {d}."
            )
        return complex(self.gen[d + self.n - 1])

    def dense(self) -> NDArray[np.complex128]:
        n = self.n
        # first column t_0..t_{n-1}, first row t_0..t_{-n+1}
        return scipy.linalg.toeplitz(self.gen[n - 1 :], self.gen[n - 1 :: -1])


@dataclass(frozen=True)
class OrthonormalBasis:
    """
    An n x r matrix with orthonormal columns,
    representing an r-dimensional subspace of C^n.
    """

    basis: NDArray[np.complex128]

    def __post_init__(self) -> None:
        basis = as_complex_matrix(self.basis, "basis").copy()
        ambient, dim = basis.shape
        if dim > ambient:
            raise InvalidArgumentError(
                f"Subspace dimension {dim} exceeds ambient dimension {ambient}."
            )
        gram_error = np.abs(basis.conj().T @ basis - np.eye(dim)).max(initial=0.0)
        if gram_error > ORTHONORMAL_TOL:
            raise InvalidArgumentError(
                f"Basis columns are not orthonormal; max |B*B - I| = {gram_error:.3e}."
            )
        basis.setflags(write=False)
        object.__setattr__(self, "basis", basis)

    @classmethod
    def from_columns(cls, columns: ArrayLike) -> "OrthonormalBasis":
        """Orthonormal basis for the range of a full column rank matrix (thin QR)."""
        q, _ = scipy.linalg.qr(as_complex_matrix(columns, "columns"), mode="economic")
        return cls(q)

    @property
    def ambient(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> NDArray[np.complex128]:
        return self.basis @ self.basis.conj().T


def fourier_matrix(n: int, x: FrequencySet | ArrayLike) -> NDArray[np.complex128]:
    """
    The n x |x| Fourier matrix with entries exp(i j x_k),
    rows j = 0..n-1 and columns ordered as ``x``.
    """
    n = validate_positive_int(n, "n")
    xs = np.asarray(x, dtype=np.float64).reshape(-1)
    return np.exp(1j * np.outer(np.arange(n), xs))


def toeplitz_from_params(
    n: int, x: FrequencySet | ArrayLike, a: ArrayLike
) -> ToeplitzMatrix:
    """
    The Toeplitz matrix Phi(n, x) diag(a) Phi(n, x)^*,
    built through its generating sequence
    t_d = sum_k a_k exp(i d x_k).

    Parameters
    ----------
    n
        Matrix dimension.
    x
        Frequencies.
    a
        Amplitudes, one per frequency.

    Returns
    -------
    ToeplitzMatrix
        The structured matrix.
    """
    n = validate_positive_int(n, "n")
    xs = np.asarray(x, dtype=np.float64).reshape(-1)
    amps = as_complex_vector(a, "a")
    if amps.size != xs.size:
        raise InvalidArgumentError(
            f"Need one amplitude per frequency; got {amps.size} and {xs.size}."
        )
    offsets = np.arange(-n + 1, n)
    return ToeplitzMatrix(np.exp(1j * np.outer(offsets, xs)) @ amps)


def hankel_generator(
    n: int, x: FrequencySet | ArrayLike, b: ArrayLike
) -> NDArray[np.complex128]:
    """
    Anti-diagonal values h_s = sum_k b_k exp(i s x_k),
    s = 0..2n-2, of Phi(n, x) diag(b) Phi(n, x)^T.
    """
    n = validate_positive_int(n, "n")
    xs = np.asarray(x, dtype=np.float64).reshape(-1)
    amps = as_complex_vector(b, "b")
    if amps.size != xs.size:
        raise InvalidArgumentError(
            f"Need one amplitude per frequency; got {amps.size} and {xs.size}."
        )
    return np.exp(1j * np.outer(np.arange(2 * n - 1), xs)) @ amps


def hankel_from_params(
    n: int, x: FrequencySet | ArrayLike, b: ArrayLike
) -> NDArray[np.complex128]:
    """Dense Hankel matrix Phi(n, x) diag(b) Phi(n, x)^T."""
    gen = hankel_generator(n, x, b)
    return scipy.linalg.hankel(gen[:n], gen[n - 1 :])


def toeplitz_lift(y: ArrayLike) -> ToeplitzMatrix:
    """
    Toeplitz matrix T(y) of a sequence y_{-n+1}..y_{n-1},
    with T(y)_{j,k} = y_{j-k}.

    Raises
    ------
    InvalidArgumentError
        If the sequence has even length.
    """
    seq = as_complex_vector(y, "y")
    if seq.size % 2 == 0:
        raise InvalidArgumentError(
            f"toeplitz_lift needs an odd-length sequence; got length {seq.size}."
        )
    return ToeplitzMatrix(seq)


def hankel_lift(u: ArrayLike) -> NDArray[np.complex128]:
    """
    The m x (n - m + 1) Hankel matrix of a length-n
    sequence, m = ceil(n / 2), with entry (j, k) = u_{j+k}.
    """
    seq = as_complex_vector(u, "u")
    n = seq.size
    if n < 2:
        raise InvalidArgumentError(f"hankel_lift needs n >= 2; got {n}.")
    m = math.ceil(n / 2)
    return scipy.linalg.hankel(seq[:m], seq[m - 1 :])


def reverse_columns(M: ArrayLike) -> NDArray[np.complex128]:
    """Right multiplication by the reversal permutation J."""
    return as_complex_matrix(M, "M")[:, ::-1].copy()


def truncated_svd(
    M: ArrayLike, r: int
) -> tuple[OrthonormalBasis, NDArray[np.float64], OrthonormalBasis]:
    """
    Leading r singular triplets of ``M``.

    Parameters
    ----------
    M
        Any complex matrix.
    r
        Number of singular triplets, 1 <= r <= min(M.shape).

    Returns
    -------
    tuple[OrthonormalBasis, NDArray[np.float64], OrthonormalBasis]
        Left basis, non-increasing singular values
        and right basis; U diag(s) V^* is a best rank-r
        Frobenius approximant of ``M``.
    """
    mat = as_complex_matrix(M, "M")
    r = _validate_rank(r, mat.shape)
    u, s, vh = scipy.linalg.svd(mat, full_matrices=False)
    return OrthonormalBasis(u[:, :r]), s[:r], OrthonormalBasis(vh[:r].conj().T)


def leading_left_subspace(M: ArrayLike, r: int) -> OrthonormalBasis:
    """
    The left basis of :func:`truncated_svd`, taken from
    the r leading eigenvectors of the Gram matrix M M^*.
    Skips the right singular vectors, so it is cheaper
    when only the column space is needed.
    """
    mat = as_complex_matrix(M, "M")
    r = _validate_rank(r, mat.shape)
    rows = mat.shape[0]
    _, vecs = scipy.linalg.eigh(mat @ mat.conj().T, subset_by_index=[rows - r, rows - 1])
    # eigh returns ascending eigenvalues
    return OrthonormalBasis(vecs[:, ::-1])


def singular_values(M: ArrayLike) -> NDArray[np.float64]:
    """All singular values of ``M`` in non-increasing order."""
    return scipy.linalg.svdvals(as_complex_matrix(M, "M"))


def low_rank_approximation(M: ArrayLike, r: int) -> NDArray[np.complex128]:
    """Reconstruction U diag(s) V^* from :func:`truncated_svd`."""
    left, s, right = truncated_svd(M, r)
    return (left.basis * s) @ right.basis.conj().T


def _validate_rank(r: int, shape: tuple[int, int]) -> int:
    r = validate_positive_int(r, "r", minimum=0)
    if r < 1 or r > min(shape):
        raise InvalidArgumentError(
            f"Rank must lie in [1, {min(shape)}] for a {shape} matrix; got {r}."
        )
    return r


def least_squares_inverse_apply(A: ArrayLike, B: ArrayLike) -> NDArray[np.complex128]:
    """
    Apply the Moore-Penrose pseudoinverse of ``A`` to
    the columns of ``B``.

    Raises
    ------
    IllConditionedError
        If the smallest singular value of ``A`` is at most
        ``PINV_RCOND`` times the largest.
    """
    a = as_complex_matrix(A, "A")
    b = np.asarray(B, dtype=np.complex128)
    if b.shape[0] != a.shape[0]:
        raise InvalidArgumentError(
            f"Row counts differ: A has {a.shape[0]}, B has {b.shape[0]}."
        )
    u, s, vh = scipy.linalg.svd(a, full_matrices=False)
    if a.shape[1] > a.shape[0] or s[0] == 0 or s[-1] <= PINV_RCOND * s[0]:
        ratio = 0.0 if s[0] == 0 or a.shape[1] > a.shape[0] else s[-1] / s[0]
        raise IllConditionedError(ratio)
    coeffs = u.conj().T @ b
    coeffs = coeffs / (s[:, None] if coeffs.ndim == 2 else s)
    return vh.conj().T @ coeffs


def sin_theta(U: OrthonormalBasis, W: OrthonormalBasis) -> tuple[float, float]:
    """
    Spectral and Frobenius norms of the sin-theta
    matrix between two equal-dimension subspaces.

    The sines are the singular values of the residual
    W - U U^* W, so angles near zero keep full relative
    accuracy.

    Returns
    -------
    tuple[float, float]
        ``(max_k sin(theta_k), sqrt(sum_k sin(theta_k)^2))``.
    """
    if U.ambient != W.ambient or U.dim != W.dim:
        raise InvalidArgumentError(
            "sin_theta needs subspaces of equal ambient and subspace dimension;"
            f" got {U.basis.shape} and {W.basis.shape}."
        )
    residual = W.basis - U.basis @ (U.basis.conj().T @ W.basis)
    sines = np.clip(scipy.linalg.svdvals(residual), 0.0, 1.0)
    spectral = float(sines.max(initial=0.0))
    frobenius = min(float(np.linalg.norm(residual)), math.sqrt(W.dim))
    return spectral, frobenius


def eps_rank(sigma: ArrayLike, eps: float) -> int:
    """Number of singular values at least ``eps`` times the largest."""
    s = np.asarray(sigma, dtype=np.float64)
    if eps <= 0:
        raise InvalidArgumentError(f"eps must be positive; got {eps}.")
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.count_nonzero(s >= eps * s[0]))
