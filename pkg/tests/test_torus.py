"""
Test file for functions contained
within torus.py
"""

import math

import numpy as np
import pytest

import spectraltools
from spectraltools.torus import matching_distance_bruteforce


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.mark.parametrize(
    "u, v, expected",
    [
        (0.0, 0.0, 0.0),
        (0.0, 3 * math.pi, math.pi),
        (0.1, 2 * math.pi - 0.1, 0.2),
        (-0.3, 0.3, 0.6),
        (1.0, 1.0 + 4 * math.pi, 0.0),
    ],
)
def test_wrap_distance_examples(u, v, expected):
    """
    Test wrap_distance on identity, antipodal and
    across-zero pairs.
    """
    assert spectraltools.wrap_distance(u, v) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("bad", [np.nan, np.inf, -np.inf])
def test_wrap_distance_rejects_non_finite(bad):
    with pytest.raises(spectraltools.InvalidArgumentError):
        spectraltools.wrap_distance(0.0, bad)


def test_wrap_distance_is_a_metric(rng):
    """
    Symmetry, range and triangle inequality
    on random triples.
    """
    u, v, w = rng.uniform(-10, 10, size=(3, 500))
    d_uv = spectraltools.wrap_distance(u, v)
    d_vu = spectraltools.wrap_distance(v, u)
    d_uw = spectraltools.wrap_distance(u, w)
    d_wv = spectraltools.wrap_distance(w, v)
    np.testing.assert_allclose(d_uv, d_vu, atol=1e-12)
    assert np.all(d_uv >= 0) and np.all(d_uv <= math.pi + 1e-12)
    assert np.all(d_uv <= d_uw + d_wv + 1e-12)


def test_canonicalize_range_and_snap():
    """
    Values land in [0, 2pi) and drift just below
    2pi snaps to 0.
    """
    values = spectraltools.canonicalize([-1e-3, 2 * math.pi, 7.0, 2 * math.pi - 1e-14])
    assert np.all(values >= 0) and np.all(values < 2 * math.pi)
    assert values[1] == 0.0
    assert values[3] == 0.0
    assert values[2] == pytest.approx(7.0 - 2 * math.pi)


def test_torus_point_arithmetic_stays_canonical():
    p = spectraltools.TorusPoint(6.0)
    q = p + 1.0
    assert 0 <= q.value < 2 * math.pi
    assert q.value == pytest.approx(7.0 - 2 * math.pi)
    assert (p - 7.0).value == pytest.approx(2 * math.pi - 1.0)
    assert p.distance(0.0) == pytest.approx(2 * math.pi - 6.0)


@pytest.mark.parametrize(
    "values, expected",
    [
        ([0.0, math.pi], math.pi),
        ([0.0, math.pi / 2, math.pi], math.pi / 2),
        ([0.1, 6.2], 2 * math.pi - 6.1),
        ([1.0], 2 * math.pi),
    ],
)
def test_min_separation_examples(values, expected):
    """
    Test min_separation including the wrap gap
    and the singleton convention.
    """
    x = spectraltools.FrequencySet.from_values(values)
    assert spectraltools.min_separation(x) == pytest.approx(expected, abs=1e-12)


def test_min_separation_matches_pairwise_oracle(rng):
    for _ in range(50):
        values = rng.uniform(0, 2 * math.pi, size=7)
        pairwise = min(
            spectraltools.wrap_distance(values[j], values[k])
            for j in range(7)
            for k in range(j + 1, 7)
        )
        assert spectraltools.min_separation(values) == pytest.approx(pairwise, abs=1e-12)


def test_frequency_set_sorts_and_wraps():
    x = spectraltools.FrequencySet.from_values([3.0, -1.0, 1.0])
    assert np.all(np.diff(x.values) > 0)
    np.testing.assert_allclose(x.values, [1.0, 3.0, 2 * math.pi - 1.0])
    assert len(x) == 3
    assert [p.value for p in x] == list(x.values)


@pytest.mark.parametrize(
    "values",
    [
        [],  # empty
        [0.5, 0.5],  # duplicate
        [1.0, 0.5],  # not increasing
        [0.0, 7.0],  # outside [0, 2pi)
    ],
)
def test_frequency_set_rejects_invalid(values):
    with pytest.raises(spectraltools.InvalidArgumentError):
        spectraltools.FrequencySet(np.array(values, dtype=float))


def test_frequency_set_is_read_only():
    x = spectraltools.FrequencySet.from_values([0.1, 0.2])
    with pytest.raises(ValueError):
        x.values[0] = 1.0


def test_frequency_set_shifted_wraps():
    x = spectraltools.FrequencySet.from_values([0.5, 6.0])
    y = x.shifted(0.5)
    np.testing.assert_allclose(y.values, [6.5 - 2 * math.pi, 1.0])


@pytest.mark.parametrize(
    "x, y, expected",
    [
        ([0.0, math.pi], [0.0, math.pi], 0.0),
        ([0.0, math.pi], [0.1, math.pi], 0.1),
        ([0.0, math.pi / 2], [math.pi / 2 + 0.05, 2 * math.pi - 0.05], 0.05),
    ],
)
def test_matching_distance_examples(x, y, expected):
    """
    Test matching_distance_inf on identity,
    small perturbation and a wrapped matching.
    """
    assert spectraltools.matching_distance_inf(x, y) == pytest.approx(expected, abs=1e-12)


def test_matching_distance_cardinality_mismatch():
    with pytest.raises(spectraltools.InvalidArgumentError):
        spectraltools.matching_distance_inf([0.0, 1.0], [0.0])


@pytest.mark.parametrize("r", [1, 2, 3, 4, 5, 6])
def test_matching_distance_agrees_with_permutation_search(r, rng):
    """
    The cyclic-shift evaluation agrees with the
    full permutation search for small sets.
    """
    for _ in range(40):
        x = rng.uniform(0, 2 * math.pi, size=r)
        # mix of nearby and unrelated sets
        if rng.uniform() < 0.5:
            y = x + rng.normal(scale=0.3, size=r)
        else:
            y = rng.uniform(0, 2 * math.pi, size=r)
        fast = spectraltools.matching_distance_inf(x, y)
        oracle = matching_distance_bruteforce(x, y)
        assert fast == pytest.approx(oracle, abs=1e-10)
        assert spectraltools.matching_distance_inf(y, x) == pytest.approx(fast, abs=1e-10)
