"""
Radiological survey scenarios on a square-cell grid.

Each site sees background photons at rate ``lambda_0`` plus photons from
point sources at rates given by the calibrated inverse-square law with
air attenuation; the site's energy density is the rate-weighted mixture
of the background and source spectra.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd

from spatialdensity.config import ScenarioConfig
from spatialdensity.constants import (
    AIR_ATTENUATION,
    CALIBRATION_DISTANCE,
    CALIBRATION_MCI,
    CALIBRATION_RATE,
)
from spatialdensity.data_loader.records import Records
from spatialdensity.density.field import DensityField
from spatialdensity.exceptions import DomainError, InvalidDimensionError
from spatialdensity.graph.base import Graph, build_grid_graph

from .spectra import Spectrum, resolve_spectrum

SAMPLING_CHUNK = 1024


def source_count_rate(mci, distance):
    """
    Expected counts per second at ``distance`` metres from a source of
    ``mci`` milliCuries.

    Raises:
        DomainError: a distance is not positive or an activity is negative.
    """
    mci = np.asarray(mci, dtype=float)
    distance = np.asarray(distance, dtype=float)
    if np.any(distance <= 0):
        raise DomainError("distance must be positive")
    if np.any(mci < 0):
        raise DomainError("source activity must be non-negative")
    rate = (
        mci
        / CALIBRATION_MCI
        * CALIBRATION_RATE
        * (CALIBRATION_DISTANCE / distance) ** 2
        * np.exp(-AIR_ATTENUATION * (distance + CALIBRATION_DISTANCE))
    )
    return float(rate) if rate.ndim == 0 else rate


def rate_contours(mci_grid: Sequence[float], distance_grid: Sequence[float]) -> pd.DataFrame:
    """Count rate for every (source size, distance) pair."""
    mci, dist = np.meshgrid(np.asarray(mci_grid, float), np.asarray(distance_grid, float), indexing="ij")
    return pd.DataFrame(
        {
            "mci": mci.ravel(),
            "distance": dist.ravel(),
            "rate": source_count_rate(mci.ravel(), dist.ravel()),
        }
    )


@dataclass(frozen=True)
class PointSource:
    spectrum: Spectrum
    mci: float
    row: int
    col: int


@dataclass(frozen=True)
class Scenario:
    """
    Ground truth of a radiological survey.

    ``source_rates[s, k]`` is the rate of source ``k`` at site ``s`` (zero
    where occluded); sites are numbered row-major.
    """

    rows: int
    cols: int
    cell_meters: float
    background_rate: float
    background: Spectrum
    sources: List[PointSource]
    source_rates: np.ndarray
    occluded: np.ndarray = field(repr=False)

    @property
    def num_sites(self) -> int:
        return self.rows * self.cols

    @property
    def num_bins(self) -> int:
        return self.background.num_bins

    @property
    def graph(self) -> Graph:
        return build_grid_graph(self.rows, self.cols)

    @property
    def total_rates(self) -> np.ndarray:
        """``K_s = lambda_0 + sum_k lambda_k(s)``."""
        return self.background_rate + self.source_rates.sum(axis=1)

    def mixture_weights(self) -> np.ndarray:
        """Columns: background, then each source; rows sum to 1."""
        rates = np.column_stack([np.full(self.num_sites, self.background_rate), self.source_rates])
        total = rates.sum(axis=1, keepdims=True)
        weights = np.zeros_like(rates)
        np.divide(rates, total, out=weights, where=total > 0)
        weights[total[:, 0] == 0, 0] = 1.0
        return weights

    def densities(self) -> DensityField:
        spectra = np.vstack([self.background.probabilities] + [s.spectrum.probabilities for s in self.sources])
        return DensityField(pmf=self.mixture_weights() @ spectra)


def _distances(rows: int, cols: int, row: int, col: int, cell_meters: float) -> np.ndarray:
    rr, cc = np.divmod(np.arange(rows * cols), cols)
    dist = cell_meters * np.hypot(rr - row, cc - col)
    # the source's own cell
    dist[row * cols + col] = cell_meters / 2.0
    return dist


def _occlusion_mask(rows: int, cols: int, r0: int, c0: int, quadrant: str) -> np.ndarray:
    rr, cc = np.divmod(np.arange(rows * cols), cols)
    north, south = rr < r0, rr > r0
    west, east = cc < c0, cc > c0
    return {
        "nw": north & west,
        "ne": north & east,
        "sw": south & west,
        "se": south & east,
    }[quadrant]


def build_radiological_scenario(
    config: ScenarioConfig, spectra_dir: Optional[str] = None
) -> Scenario:
    """
    Builds the per-site rates and mixture densities for ``config``.

    Raises:
        InputFileError: a spectrum file is missing.
    """
    rows, cols = config.grid.rows, config.grid.cols
    background = resolve_spectrum(config.background.spectrum, config.bins, spectra_dir)

    sources = [
        PointSource(
            spectrum=resolve_spectrum(s.spectrum, config.bins, spectra_dir),
            mci=s.mci,
            row=s.row,
            col=s.col,
        )
        for s in config.sources
    ]

    rates = np.zeros((rows * cols, len(sources)))
    for k, source in enumerate(sources):
        dist = _distances(rows, cols, source.row, source.col, config.grid.cell_meters)
        rates[:, k] = source_count_rate(source.mci, dist)

    occluded = np.zeros(rows * cols, dtype=bool)
    if config.occlusion is not None:
        r0, c0 = config.occlusion.source_cell
        if not (0 <= r0 < rows and 0 <= c0 < cols):
            raise InvalidDimensionError(f"occlusion cell ({r0}, {c0}) is outside the grid")
        occluded = _occlusion_mask(rows, cols, r0, c0, config.occlusion.quadrant)
        for k, source in enumerate(sources):
            if (source.row, source.col) == (r0, c0):
                rates[occluded, k] = 0.0

    return Scenario(
        rows=rows,
        cols=cols,
        cell_meters=config.grid.cell_meters,
        background_rate=config.background.rate,
        background=background,
        sources=sources,
        source_rates=rates,
        occluded=occluded,
    )


def _multinomial_rows(totals: np.ndarray, pmf: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    out = np.empty(pmf.shape, dtype=np.int64)
    for start in range(0, pmf.shape[0], SAMPLING_CHUNK):
        stop = start + SAMPLING_CHUNK
        out[start:stop] = rng.multinomial(totals[start:stop], pmf[start:stop])
    return out


def sample_observations(scenario: Scenario, dwell: float, rng: np.random.Generator) -> np.ndarray:
    """
    Per-site histograms for ``dwell`` seconds: ``n_s ~ Poisson(dwell * K_s)``
    photons with energies drawn from the site's density.
    """
    if not dwell > 0:
        raise DomainError(f"dwell time must be positive, got {dwell}")
    totals = rng.poisson(dwell * scenario.total_rates)
    return _multinomial_rows(totals, scenario.densities().pmf, rng)


def sample_records(scenario: Scenario, seconds: int, rng: np.random.Generator) -> Records:
    """``seconds`` one-second rows per site, site-major order."""
    if seconds < 1:
        raise DomainError(f"need at least one second of records, got {seconds}")
    pmf = np.repeat(scenario.densities().pmf, seconds, axis=0)
    totals = rng.poisson(np.repeat(scenario.total_rates, seconds))
    counts = _multinomial_rows(totals, pmf, rng)
    sites = np.repeat(np.arange(scenario.num_sites), seconds)
    return Records(sites=sites, counts=counts, num_sites=scenario.num_sites)
