"""
Random problem instances for the experiments:
quasi-random well separated frequencies, Rademacher
amplitudes, and complex normal Toeplitz or vector noise.
"""

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from spectraltools.constants import MAX_GENERATOR_REJECTIONS, VALID_KINDS
from spectraltools.errors import GeneratorInfeasibleError, InvalidArgumentError
from spectraltools.gradient_music import SpectralParams
from spectraltools.structured_linalg import (
    ToeplitzMatrix,
    hankel_from_params,
    reverse_columns,
)
from spectraltools.torus import TWO_PI, FrequencySet, min_separation_of

# slack on the separation check for the rounding of (4 pi beta j + 2 pi g) / n
_SEPARATION_SLACK = 1e-12


@dataclass(frozen=True)
class ProblemSpec:
    """
    One cell of an experiment.

    Parameters
    ----------
    n
        Matrix size (or signal length for ``kind="subspace"``).
    r
        Number of frequencies.
    beta
        Separation parameter; frequencies satisfy
        Delta(x) >= 2 pi beta / n.
    sigma
        Noise level.
    trials
        Number of trials.
    master_seed
        Seed from which every trial seed is derived.
    kind
        ``"toeplitz"``, ``"hankel"`` or ``"subspace"``.
    fix_noise_norm
        Subspace kind only: rescale z so that
        |z|_2 = sigma * sqrt(n) exactly.
    """

    n: int
    r: int
    beta: float
    sigma: float
    trials: int = 10
    master_seed: int = 0
    kind: str = "toeplitz"
    fix_noise_norm: bool = False

    def __post_init__(self) -> None:
        if self.kind not in VALID_KINDS:
            raise InvalidArgumentError(
                f"kind must be one of {VALID_KINDS}; got {self.kind!r}."
            )
        if self.n < 2 or self.r < 1:
            raise InvalidArgumentError(
                f"Need n >= 2 and r >= 1; got n = {self.n}, r = {self.r}."
            )
        if self.beta < 1:
            raise InvalidArgumentError(f"beta must be at least 1; got {self.beta}.")
        if self.sigma < 0:
            raise InvalidArgumentError(f"sigma must be nonnegative; got {self.sigma}.")
        if self.r > self.n / (2 * self.beta):
            raise InvalidArgumentError(
                f"r = {self.r} exceeds n / (2 beta) = {self.n / (2 * self.beta):g};"
                " the frequency generator cannot place that many points."
            )
        if self.trials < 1:
            raise InvalidArgumentError(f"trials must be at least 1; got {self.trials}.")
        if not 0 <= self.master_seed < 2**64:
            raise InvalidArgumentError(
                f"master_seed must be a 64-bit unsigned integer; got {self.master_seed}."
            )


@dataclass(frozen=True)
class NoiseModel:
    """Complex normal noise with variance sigma^2 per entry."""

    sigma: float

    def __post_init__(self) -> None:
        if self.sigma < 0:
            raise InvalidArgumentError(f"sigma must be nonnegative; got {self.sigma}.")

    def draw(self, size: int, rng: np.random.Generator) -> NDArray[np.complex128]:
        """x + iy with x, y independent N(0, sigma^2 / 2)."""
        scale = self.sigma / math.sqrt(2)
        return scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size))


def trial_seed(master_seed: int, trial_index: int) -> int:
    """
    Per-trial seed, the first 64-bit word of
    ``SeedSequence(master_seed, spawn_key=(trial_index,))``.
    Independent of execution order.
    """
    seq = np.random.SeedSequence(entropy=master_seed, spawn_key=(trial_index,))
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def gen_frequencies(n: int, r: int, beta: float, rng: np.random.Generator) -> FrequencySet:
    """
    Quasi-random frequencies

        x_j = (4 pi beta j + 2 pi gamma_j) / n mod 2pi,  j = 1..r,

    with gamma_j uniform on [-beta/2, beta/2]. Consecutive
    points are at least 2 pi beta / n apart by construction;
    draws whose gap across 0 is smaller are redrawn.

    Raises
    ------
    GeneratorInfeasibleError
        After ``MAX_GENERATOR_REJECTIONS`` rejected draws.
    """
    if r > n / (2 * beta):
        raise InvalidArgumentError(
            f"r = {r} exceeds n / (2 beta) = {n / (2 * beta):g}."
        )
    required = TWO_PI * beta / n
    j = np.arange(1, r + 1)
    for _ in range(MAX_GENERATOR_REJECTIONS):
        gamma = rng.uniform(-beta / 2, beta / 2, size=r)
        x = FrequencySet.from_values((4 * math.pi * beta * j + TWO_PI * gamma) / n)
        if len(x) == r and min_separation_of(x.values) >= required - _SEPARATION_SLACK:
            return x
    raise GeneratorInfeasibleError(
        f"No admissible frequency set after {MAX_GENERATOR_REJECTIONS} draws"
        f" (n = {n}, r = {r}, beta = {beta})."
    )


def gen_amplitudes(r: int, rng: np.random.Generator) -> NDArray[np.complex128]:
    """i.i.d. Rademacher amplitudes, as a complex array."""
    if r < 1:
        raise InvalidArgumentError(f"r must be at least 1; got {r}.")
    return rng.choice(np.array([-1.0, 1.0]), size=r).astype(np.complex128)


def gen_params(n: int, r: int, beta: float, rng: np.random.Generator) -> SpectralParams:
    return SpectralParams(gen_frequencies(n, r, beta, rng), gen_amplitudes(r, rng))


def gen_toeplitz_noise(n: int, sigma: float, rng: np.random.Generator) -> ToeplitzMatrix:
    """Toeplitz matrix with i.i.d. complex normal(0, sigma^2) diagonals e_{-n+1}..e_{n-1}."""
    return ToeplitzMatrix(NoiseModel(sigma).draw(2 * n - 1, rng))


def gen_vector_noise(n: int, sigma: float, rng: np.random.Generator) -> NDArray[np.complex128]:
    """Length-n vector of i.i.d. complex normal(0, sigma^2) entries."""
    return NoiseModel(sigma).draw(n, rng)


@dataclass(frozen=True)
class Instance:
    """
    A drawn problem: ground truth parameters, the
    noiseless matrix (or signal) and the noise added to it.
    """

    spec: ProblemSpec
    seed: int
    params: SpectralParams
    truth: NDArray[np.complex128]
    noise: NDArray[np.complex128]

    @property
    def observed(self) -> NDArray[np.complex128]:
        return self.truth + self.noise


def draw_instance(spec: ProblemSpec, trial_index: int = 0) -> Instance:
    """
    Draw trial ``trial_index`` of ``spec``: frequencies,
    then amplitudes, then noise, from a PCG64 generator
    seeded by :func:`trial_seed`.

    Toeplitz cells add Toeplitz noise E, Hankel cells add
    the Hankel noise E J, and subspace cells add a noise
    vector z (rescaled to |z|_2 = sigma sqrt(n) when
    ``spec.fix_noise_norm``).
    """
    if trial_index < 0:
        raise InvalidArgumentError(f"trial_index must be nonnegative; got {trial_index}.")
    seed = trial_seed(spec.master_seed, trial_index)
    rng = np.random.Generator(np.random.PCG64(seed))
    params = gen_params(spec.n, spec.r, spec.beta, rng)
    n = spec.n
    if spec.kind == "subspace":
        truth = params.signal(n)
        noise = gen_vector_noise(n, spec.sigma, rng)
        norm = np.linalg.norm(noise)
        if spec.fix_noise_norm and norm > 0:
            noise = noise * (spec.sigma * math.sqrt(n) / norm)
    elif spec.kind == "hankel":
        truth = hankel_from_params(n, params.x, params.a)
        noise = reverse_columns(gen_toeplitz_noise(n, spec.sigma, rng).dense())
    else:
        truth = params.toeplitz(n).dense()
        noise = gen_toeplitz_noise(n, spec.sigma, rng).dense()
    return Instance(spec=spec, seed=seed, params=params, truth=truth, noise=noise)
