"""
Test file for functions contained
within instances.py
"""

import math

import numpy as np
import pytest

import spectraltools


@pytest.fixture
def rng():
    return np.random.default_rng(55)


def test_gen_frequencies_are_separated(rng):
    """Every draw has r points at least 2 pi beta / n apart."""
    n, r, beta = 200, 20, 4
    for _ in range(1000):
        x = spectraltools.gen_frequencies(n, r, beta, rng)
        assert len(x) == r
        assert spectraltools.min_separation(x) >= 2 * math.pi * beta / n - 1e-12


def test_gen_frequencies_at_capacity(rng):
    x = spectraltools.gen_frequencies(64, 8, 4, rng)
    assert len(x) == 8


def test_gen_frequencies_rejects_too_many_points(rng):
    with pytest.raises(spectraltools.InvalidArgumentError):
        spectraltools.gen_frequencies(64, 9, 4, rng)


def test_gen_amplitudes_are_rademacher(rng):
    a = spectraltools.gen_amplitudes(2000, rng)
    assert a.dtype == np.complex128
    assert set(np.unique(a.real)) == {-1.0, 1.0}
    np.testing.assert_array_equal(a.imag, 0)
    assert abs(np.mean(a.real)) < 0.1


def test_amplitude_mean_vanishes(rng):
    assert abs(np.mean(spectraltools.gen_amplitudes(10_000, rng).real)) <= 0.05


def test_toeplitz_noise_norm_envelope(rng):
    """|E|_2 <= 5 sigma sqrt(n log n) in at least 95% of draws."""
    n, sigma = 200, 0.1
    bound = 5 * sigma * math.sqrt(n * math.log(n))
    norms = [
        np.linalg.norm(spectraltools.gen_toeplitz_noise(n, sigma, rng).dense(), 2)
        for _ in range(200)
    ]
    assert np.mean(np.array(norms) <= bound) >= 0.95


def test_vector_noise_energy(rng):
    n, sigma = 50, 0.4
    energy = [
        np.linalg.norm(spectraltools.gen_vector_noise(n, sigma, rng)) ** 2
        for _ in range(10_000)
    ]
    assert np.mean(energy) == pytest.approx(n * sigma**2, rel=0.1)


def test_noise_variance(rng):
    """E|e|^2 = sigma^2, split evenly between real and imaginary parts."""
    e = spectraltools.NoiseModel(0.3).draw(200_000, rng)
    assert np.mean(np.abs(e) ** 2) == pytest.approx(0.09, rel=0.02)
    assert np.var(e.real) == pytest.approx(0.045, rel=0.03)
    assert np.var(e.imag) == pytest.approx(0.045, rel=0.03)


def test_zero_sigma_gives_zero_noise(rng):
    np.testing.assert_array_equal(spectraltools.gen_vector_noise(10, 0.0, rng), 0)
    np.testing.assert_array_equal(spectraltools.gen_toeplitz_noise(5, 0.0, rng).dense(), 0)
    with pytest.raises(spectraltools.InvalidArgumentError):
        spectraltools.NoiseModel(-1.0)


def test_toeplitz_noise_shape(rng):
    E = spectraltools.gen_toeplitz_noise(6, 1.0, rng)
    assert E.n == 6
    assert E.gen.size == 11


@pytest.mark.parametrize(
    "kwargs",
    [
        {"kind": "circulant"},
        {"n": 1},
        {"r": 0},
        {"beta": 0.5},
        {"sigma": -0.1},
        {"r": 30},
        {"trials": 0},
        {"master_seed": -1},
        {"master_seed": 2**64},
    ],
)
def test_problem_spec_rejects_invalid(kwargs):
    settings = {"n": 200, "r": 10, "beta": 4.0, "sigma": 0.1}
    settings.update(kwargs)
    with pytest.raises(spectraltools.InvalidArgumentError):
        spectraltools.ProblemSpec(**settings)


def test_trial_seed_is_deterministic_and_distinct():
    seeds = [spectraltools.trial_seed(7, k) for k in range(50)]
    assert seeds == [spectraltools.trial_seed(7, k) for k in range(50)]
    assert len(set(seeds)) == 50
    assert all(0 <= s < 2**64 for s in seeds)
    assert spectraltools.trial_seed(8, 0) != seeds[0]


def test_draw_instance_is_reproducible():
    spec = spectraltools.ProblemSpec(n=50, r=3, beta=4, sigma=0.2, master_seed=11)
    first = spectraltools.draw_instance(spec, 4)
    second = spectraltools.draw_instance(spec, 4)
    assert first.seed == spectraltools.trial_seed(11, 4)
    assert first.params.x == second.params.x
    np.testing.assert_array_equal(first.observed, second.observed)
    other = spectraltools.draw_instance(spec, 5)
    assert other.params.x != first.params.x


def test_draw_instance_toeplitz():
    spec = spectraltools.ProblemSpec(n=40, r=3, beta=4, sigma=0.1, master_seed=1)
    inst = spectraltools.draw_instance(spec)
    np.testing.assert_allclose(inst.truth, inst.params.toeplitz(40).dense())
    noise = spectraltools.project_toeplitz(inst.noise).dense()
    np.testing.assert_allclose(noise, inst.noise, atol=1e-12)
    assert inst.params.in_class(2 * math.pi * 4 / 40 - 1e-12, 3)


def test_draw_instance_hankel():
    spec = spectraltools.ProblemSpec(n=40, r=3, beta=4, sigma=0.1, kind="hankel")
    inst = spectraltools.draw_instance(spec)
    np.testing.assert_allclose(
        inst.truth, spectraltools.hankel_from_params(40, inst.params.x, inst.params.a)
    )
    # E J is Hankel, so reversing its columns gives a Toeplitz matrix
    reversed_noise = inst.noise[:, ::-1]
    np.testing.assert_allclose(
        spectraltools.project_toeplitz(reversed_noise).dense(), reversed_noise, atol=1e-12
    )


@pytest.mark.parametrize("fix_noise_norm", [False, True])
def test_draw_instance_subspace(fix_noise_norm):
    spec = spectraltools.ProblemSpec(
        n=100, r=4, beta=8, sigma=0.25, kind="subspace", fix_noise_norm=fix_noise_norm
    )
    inst = spectraltools.draw_instance(spec, 2)
    assert inst.truth.shape == (100,)
    np.testing.assert_allclose(inst.truth, inst.params.signal(100))
    if fix_noise_norm:
        assert np.linalg.norm(inst.noise) == pytest.approx(0.25 * math.sqrt(100))


def test_draw_instance_rejects_negative_trial():
    spec = spectraltools.ProblemSpec(n=40, r=3, beta=4, sigma=0.1)
    with pytest.raises(spectraltools.InvalidArgumentError):
        spectraltools.draw_instance(spec, -1)
