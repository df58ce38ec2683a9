import numpy as np
import pytest

from spatialdensity.anomaly.ks import ks_one_sample, ks_two_sample
from spatialdensity.exceptions import EmptyInputError, InvalidDimensionError


class TestOneSample:
    def test_proportional_observation(self):
        pmf = np.array([0.1, 0.2, 0.3, 0.4])
        result = ks_one_sample(np.array([1, 2, 3, 4]), np.cumsum(pmf), site=3)
        assert result.statistic == pytest.approx(0.0, abs=1e-12)
        assert result.site == 3
        assert result.sample_size == 10

    def test_point_mass_against_uniform(self):
        assert ks_one_sample(np.array([5, 0]), np.array([0.5, 1.0])).statistic == pytest.approx(0.5)

    def test_two_counts_against_uniform(self):
        result = ks_one_sample(np.array([1, 0, 0, 1]), np.array([0.25, 0.5, 0.75, 1.0]))
        assert result.statistic == pytest.approx(0.25)

    def test_channel_restriction_renormalises(self):
        observed = np.array([100, 1, 1, 0])
        reference = np.cumsum([0.7, 0.1, 0.1, 0.1])
        result = ks_one_sample(observed, reference, channels=(1, 3))
        # restricted: observed (1, 1, 0) vs reference (1/3, 1/3, 1/3)
        assert result.statistic == pytest.approx(1.0 / 3.0)
        assert result.sample_size == 2

    def test_empty_observation(self):
        with pytest.raises(EmptyInputError):
            ks_one_sample(np.zeros(3), np.array([0.2, 0.5, 1.0]))

    def test_mismatched_bins(self):
        with pytest.raises(InvalidDimensionError):
            ks_one_sample(np.ones(3), np.array([0.5, 1.0]))

    def test_bad_channel_range(self):
        with pytest.raises(InvalidDimensionError):
            ks_one_sample(np.ones(3), np.array([0.2, 0.5, 1.0]), channels=(1, 3))


class TestTwoSample:
    def test_identical(self):
        assert ks_two_sample(np.array([3, 1, 2]), np.array([3, 1, 2])).statistic == 0.0

    def test_identical_shape_different_totals(self):
        assert ks_two_sample(np.array([1, 2]), np.array([10, 20])).statistic == pytest.approx(0.0)

    def test_disjoint_supports(self):
        assert ks_two_sample(np.array([4, 0, 0]), np.array([0, 0, 7])).statistic == 1.0

    def test_small_example(self):
        assert ks_two_sample(np.array([1, 1]), np.array([0, 2])).statistic == pytest.approx(0.5)

    def test_empty_sample(self):
        with pytest.raises(EmptyInputError):
            ks_two_sample(np.array([0, 0]), np.array([1, 1]))
