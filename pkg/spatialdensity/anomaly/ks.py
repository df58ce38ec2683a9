from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from spatialdensity.exceptions import EmptyInputError, InvalidDimensionError

Channels = Optional[Tuple[int, int]]


@dataclass(frozen=True)
class KsResult:
    statistic: float
    site: int
    sample_size: int


def _restrict(values: np.ndarray, channels: Channels) -> np.ndarray:
    if channels is None:
        return values
    lo, hi = channels
    if lo < 0 or hi >= values.shape[-1] or hi < lo:
        raise InvalidDimensionError(
            f"channel range [{lo}, {hi}] is outside [0, {values.shape[-1]})"
        )
    return values[..., lo : hi + 1]


def _empirical_cdf(histogram: np.ndarray) -> np.ndarray:
    total = histogram.sum()
    if total <= 0:
        raise EmptyInputError("observation has no counts in the tested channels")
    return np.cumsum(histogram) / total


def ks_one_sample(
    observed,
    reference_cdf,
    site: int = -1,
    channels: Channels = None,
) -> KsResult:
    """
    One-sample KS distance between a binned observation and a reference CDF.

    With ``channels = (lo, hi)`` both distributions are restricted to those
    channels and renormalised.

    Raises:
        EmptyInputError: the observation has no counts.
        InvalidDimensionError: the bin grids differ.
    """
    observed = np.asarray(observed, dtype=float)
    reference_cdf = np.asarray(reference_cdf, dtype=float)
    if observed.shape != reference_cdf.shape:
        raise InvalidDimensionError(
            f"observation has {observed.shape} bins, reference has {reference_cdf.shape}"
        )
    reference_pmf = np.diff(reference_cdf, prepend=0.0)
    obs = _restrict(observed, channels)
    ref = _restrict(reference_pmf, channels)
    ref_total = ref.sum()
    if ref_total <= 0:
        raise EmptyInputError("reference has no mass in the tested channels")

    f_emp = _empirical_cdf(obs)
    f_ref = np.cumsum(ref) / ref_total
    return KsResult(
        statistic=float(np.max(np.abs(f_emp - f_ref))),
        site=site,
        sample_size=int(obs.sum()),
    )


def ks_two_sample(first, second, site: int = -1, channels: Channels = None) -> KsResult:
    """KS distance between the empirical CDFs of two binned samples."""
    first = np.asarray(first, dtype=float)
    second = np.asarray(second, dtype=float)
    if first.shape != second.shape:
        raise InvalidDimensionError(
            f"histograms have different bin grids: {first.shape} vs {second.shape}"
        )
    a, b = _restrict(first, channels), _restrict(second, channels)
    statistic = float(np.max(np.abs(_empirical_cdf(a) - _empirical_cdf(b))))
    return KsResult(statistic=statistic, site=site, sample_size=int(a.sum()))
