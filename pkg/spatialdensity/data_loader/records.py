from dataclasses import dataclass

import numpy as np

from spatialdensity.exceptions import InvalidDimensionError, NumericInputError


@dataclass(frozen=True)
class Records:
    """
    One-second observation rows: ``counts[r]`` was recorded at site ``sites[r]``.
    """

    sites: np.ndarray
    counts: np.ndarray
    num_sites: int

    def __post_init__(self):
        sites = np.asarray(self.sites, dtype=np.int64).reshape(-1)
        counts = np.asarray(self.counts)
        if counts.ndim != 2 or counts.shape[0] != sites.shape[0]:
            raise InvalidDimensionError(
                f"expected one count row per record, got {counts.shape} for {sites.shape[0]} records"
            )
        if np.any(counts < 0):
            raise NumericInputError("record counts must be non-negative")
        if sites.size and (sites.min() < 0 or sites.max() >= self.num_sites):
            raise InvalidDimensionError(f"record sites must lie in [0, {self.num_sites})")
        object.__setattr__(self, "sites", sites)
        object.__setattr__(self, "counts", counts.astype(np.int64))

    def __len__(self) -> int:
        return int(self.sites.shape[0])

    @property
    def num_bins(self) -> int:
        return int(self.counts.shape[1])

    def for_site(self, s: int) -> np.ndarray:
        return self.counts[self.sites == s]

    def subset(self, mask) -> "Records":
        mask = np.asarray(mask)
        return Records(sites=self.sites[mask], counts=self.counts[mask], num_sites=self.num_sites)

    def histograms(self) -> np.ndarray:
        """Per-site sums of the rows, shape ``(num_sites, num_bins)``."""
        out = np.zeros((self.num_sites, self.num_bins), dtype=np.int64)
        np.add.at(out, self.sites, self.counts)
        return out
