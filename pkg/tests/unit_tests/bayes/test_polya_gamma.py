import numpy as np
import pytest

from spatialdensity.bayes.polya_gamma import polya_gamma_mean, sample_polya_gamma


@pytest.mark.parametrize(
    "b,psi,expected",
    [
        (1, 0.0, 0.25),
        (1, 2.0, np.tanh(1.0) / 4.0),
        (4, 2.0, np.tanh(1.0)),
        (3, -2.0, 3 * np.tanh(1.0) / 4.0),
    ],
)
def test_analytic_mean(b, psi, expected):
    assert polya_gamma_mean(b, psi) == pytest.approx(expected)


def test_zero_shape_is_point_mass():
    draws = sample_polya_gamma(np.zeros(5, dtype=int), np.ones(5), np.random.default_rng(0))
    np.testing.assert_array_equal(draws, np.zeros(5))


def test_scalar_in_scalar_out():
    draw = sample_polya_gamma(2, 0.5, np.random.default_rng(0))
    assert isinstance(draw, float)
    assert draw > 0


def test_negative_shape_rejected():
    with pytest.raises(ValueError):
        sample_polya_gamma(-1, 0.0, np.random.default_rng(0))


def test_same_seed_same_draws():
    a = sample_polya_gamma(np.full(10, 3), np.linspace(-2, 2, 10), np.random.default_rng(4))
    b = sample_polya_gamma(np.full(10, 3), np.linspace(-2, 2, 10), np.random.default_rng(4))
    np.testing.assert_array_equal(a, b)


@pytest.mark.slow
@pytest.mark.parametrize("b,psi", [(1, 0.0), (1, 2.0), (4, 2.0)])
def test_sample_mean_matches_analytic_mean(b, psi):
    n = 100_000
    draws = sample_polya_gamma(np.full(n, b), np.full(n, psi), np.random.default_rng(12))
    standard_error = draws.std() / np.sqrt(n)
    assert abs(draws.mean() - polya_gamma_mean(b, psi)) < 4 * standard_error
