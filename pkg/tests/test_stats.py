import numpy as np
import pytest
from scipy import stats

from randmaps.maps import DistanceProfile
from randmaps.stats import (
    EmpiricalMeasure,
    ks_distance,
    ks_two_sample,
    mixture,
    rescale_profile,
    shift_nonnegative,
    width,
)


def test_measure_invariants():
    mu = EmpiricalMeasure([2.0, 0.0, 2.0], [0.25, 0.5, 0.25])
    assert mu.atoms.tolist() == [0.0, 2.0]
    assert mu.masses.tolist() == [0.5, 0.5]
    with pytest.raises(ValueError):
        EmpiricalMeasure([0.0], [0.5])
    with pytest.raises(ValueError):
        EmpiricalMeasure([0.0, 1.0], [1.0, 0.0])
    with pytest.raises(ValueError):
        EmpiricalMeasure([], [])
    assert mu.cdf(np.array([-1.0, 0.0, 1.0, 2.0])).tolist() == [0.0, 0.5, 0.5, 1.0]
    assert mu.mean() == 1.0


def test_rescale_profile_examples():
    mu = rescale_profile(DistanceProfile(np.array([0]), "vertex"), 2)
    assert mu.atoms.tolist() == [0.0] and mu.masses.tolist() == [1.0]
    mu = rescale_profile([0, 1, 1, 2], 2)
    step = 8 ** -0.25
    assert np.allclose(mu.atoms, [0, step, 2 * step])
    assert mu.masses.tolist() == [0.25, 0.5, 0.25]
    assert mu.sup == pytest.approx(2 / (2 * 4) ** 0.25)
    # explicit n: the atoms scale with the given size, masses stay 1/|p|
    assert rescale_profile([0, 3], 1, n=81).atoms.tolist() == [0.0, 1.0]
    with pytest.raises(ValueError):
        rescale_profile([], 1)
    with pytest.raises(ValueError):
        rescale_profile([1], 0)


def test_rescale_preserves_mass_and_order():
    rng = np.random.default_rng(60)
    p = rng.integers(0, 30, size=500)
    mu = rescale_profile(p, 8 / 9)
    assert abs(mu.masses.sum() - 1) < 1e-12
    raw = EmpiricalMeasure.from_samples(p)
    assert np.allclose(mu.atoms, raw.atoms / (8 / 9 * 500) ** 0.25)
    assert np.allclose(mu.masses, raw.masses)


def test_ks_examples():
    mu = EmpiricalMeasure.from_samples([0.0, 1.0, 2.0])
    assert ks_distance(mu, mu) == 0
    assert ks_distance(EmpiricalMeasure.from_samples([0, 1]), EmpiricalMeasure.from_samples([5, 6])) == 1
    delta = EmpiricalMeasure([0.0], [1.0])
    half = EmpiricalMeasure([0.0, 1.0], [0.5, 0.5])
    assert ks_distance(delta, half) == 0.5


def test_ks_matches_scipy():
    rng = np.random.default_rng(61)
    for _ in range(30):
        a = rng.normal(size=int(rng.integers(5, 300)))
        b = rng.normal(0.2, 1.1, size=int(rng.integers(5, 300)))
        assert ks_two_sample(a, b) == pytest.approx(stats.ks_2samp(a, b).statistic, abs=1e-12)
        # ties
        a, b = np.round(a), np.round(b)
        assert ks_two_sample(a, b) == pytest.approx(stats.ks_2samp(a, b).statistic, abs=1e-12)


def test_ks_is_a_metric_on_random_triples():
    rng = np.random.default_rng(62)
    for _ in range(50):
        a, b, c = (_random_measure(rng) for _ in range(3))
        assert ks_distance(a, b) == ks_distance(b, a)
        assert ks_distance(a, c) <= ks_distance(a, b) + ks_distance(b, c) + 1e-12
        assert 0 <= ks_distance(a, b) <= 1


def _random_measure(rng):
    k = int(rng.integers(1, 15))
    w = rng.random(k) + 0.05
    return EmpiricalMeasure(rng.integers(0, 8, size=k).astype(float), w / w.sum())


def test_shift_and_width():
    mu = EmpiricalMeasure.from_samples([-1.0, 2.0])
    assert shift_nonnegative(mu).atoms.tolist() == [0.0, 3.0]
    assert width(mu) == 3
    nu = EmpiricalMeasure.from_samples([0.0, 5.0])
    assert shift_nonnegative(nu) == nu
    assert width(shift_nonnegative(mu)) == width(mu)
    assert mu.scale(2).atoms.tolist() == [-2.0, 4.0]


def test_mixture():
    a = EmpiricalMeasure.from_samples([0.0])
    b = EmpiricalMeasure.from_samples([1.0, 2.0])
    m = mixture([a, b])
    assert m.atoms.tolist() == [0.0, 1.0, 2.0]
    assert m.masses.tolist() == [0.5, 0.25, 0.25]
