from typing import Tuple

import numpy as np

from spatialdensity.data_loader.records import Records
from spatialdensity.exceptions import DomainError, EmptyInputError
from spatialdensity.radsim.spectra import Spectrum


def bootstrap_background(rows, seconds: int, rng: np.random.Generator) -> np.ndarray:
    """Sum of ``seconds`` one-second rows drawn with replacement."""
    rows = np.asarray(rows)
    if rows.ndim != 2 or rows.shape[0] == 0:
        raise EmptyInputError("site has no test rows to bootstrap from")
    if seconds < 1:
        raise DomainError(f"dwell time must be at least one second, got {seconds}")
    picks = rng.integers(0, rows.shape[0], size=seconds)
    return rows[picks].sum(axis=0)


def inject_anomaly(
    rows,
    seconds: int,
    rate: float,
    source: Spectrum,
    rng: np.random.Generator,
) -> np.ndarray:
    """
    Bootstrap + anomaly observation: ``seconds`` resampled rows plus
    ``Poisson(seconds * rate)`` photons drawn from ``source``.

    Raises:
        EmptyInputError: no rows for the site.
    """
    if rate < 0:
        raise DomainError(f"anomaly rate must be non-negative, got {rate}")
    background = bootstrap_background(rows, seconds, rng)
    if source.num_bins != background.shape[0]:
        raise DomainError(
            f"source spectrum has {source.num_bins} bins, observations have {background.shape[0]}"
        )
    photons = rng.poisson(seconds * rate)
    return background + rng.multinomial(photons, source.probabilities)


def train_test_split(
    records: Records, fraction: float, rng: np.random.Generator
) -> Tuple[Records, Records]:
    """Assigns each one-second row to training with probability ``fraction``."""
    in_train = rng.random(len(records)) < fraction
    return records.subset(in_train), records.subset(~in_train)


def global_reference(train_histograms) -> np.ndarray:
    """Pooled training frequencies across all sites, as a CDF."""
    pooled = np.asarray(train_histograms, dtype=float).sum(axis=0)
    total = pooled.sum()
    if total <= 0:
        raise EmptyInputError("training data holds no counts")
    cdf = np.cumsum(pooled / total)
    cdf[-1] = 1.0
    return cdf
