from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from spatialdensity.constants import (
    DEFAULT_NUM_BINS,
    GAUSSIAN_FAMILIES,
    GAUSSIAN_MEAN_RANGE,
    GAUSSIAN_SUPPORT,
)
from spatialdensity.density.field import DensityField
from spatialdensity.exceptions import InvalidDimensionError, UnknownFamilyError
from spatialdensity.graph.base import Graph, build_grid_graph


@dataclass(frozen=True)
class GaussianField:
    """Unit-variance normal densities with a spatially varying mean, one per grid cell."""

    family: str
    means: np.ndarray

    @property
    def rows(self) -> int:
        return int(self.means.shape[0])

    @property
    def cols(self) -> int:
        return int(self.means.shape[1])

    @property
    def num_sites(self) -> int:
        return self.rows * self.cols

    @property
    def graph(self) -> Graph:
        return build_grid_graph(self.rows, self.cols)


def _rescale(surface: np.ndarray) -> np.ndarray:
    lo, hi = GAUSSIAN_MEAN_RANGE
    span = surface.max() - surface.min()
    if span <= 0:
        return np.zeros_like(surface)
    return lo + (surface - surface.min()) / span * (hi - lo)


def _piecewise_constant(x, y, rng):
    split_x = rng.uniform(0.25, 0.75)
    split_y = rng.uniform(0.25, 0.75)
    levels = rng.permutation(3).astype(float)
    surface = np.where(x < split_x, levels[0], np.where(y < split_y, levels[1], levels[2]))
    return surface


def _piecewise_linear(x, y, rng):
    knot = rng.uniform(0.3, 0.7)
    slope_x, slope_y = rng.uniform(0.5, 1.5, size=2) * rng.choice([-1.0, 1.0], size=2)
    return slope_x * x + slope_y * np.maximum(0.0, y - knot)


def _piecewise_quadratic(x, y, rng):
    knot = rng.uniform(0.3, 0.7)
    center = rng.uniform(0.2, 0.8)
    return (x - center) ** 2 + rng.choice([-1.0, 1.0]) * 2.0 * np.maximum(0.0, y - knot) ** 2


def _smooth(x, y, rng):
    fx, fy = rng.uniform(0.5, 1.5, size=2)
    px, py = rng.uniform(0.0, 2.0 * np.pi, size=2)
    return np.sin(2.0 * np.pi * fx * x + px) * np.cos(2.0 * np.pi * fy * y + py)


_FAMILIES = {
    "piecewise-constant": _piecewise_constant,
    "piecewise-linear": _piecewise_linear,
    "piecewise-quadratic": _piecewise_quadratic,
    "smooth": _smooth,
}


def build_gaussian_field(family: str, rows: int, cols: int, rng: np.random.Generator) -> GaussianField:
    """
    Random mean surface of the given family, rescaled onto [-3, 3].

    The polynomial families are piecewise polynomials of order 0, 1 and 2
    in the cell coordinates with random knots; ``smooth`` is a low-frequency
    sinusoidal surface.

    Raises:
        UnknownFamilyError: ``family`` is not a known tag.
        InvalidDimensionError: the grid is smaller than 2 x 2.
    """
    if family not in GAUSSIAN_FAMILIES:
        raise UnknownFamilyError(family)
    if rows < 2 or cols < 2:
        raise InvalidDimensionError(f"Gaussian fields need at least a 2x2 grid, got {rows}x{cols}")
    y, x = np.meshgrid(np.linspace(0.0, 1.0, rows), np.linspace(0.0, 1.0, cols), indexing="ij")
    means = _rescale(_FAMILIES[family](x, y, rng))
    return GaussianField(family=family, means=means)


def true_densities(field: GaussianField, bins: int = DEFAULT_NUM_BINS) -> DensityField:
    """Per-site normal mass per bin on [-6, 6], renormalised to the support."""
    edges = np.linspace(GAUSSIAN_SUPPORT[0], GAUSSIAN_SUPPORT[1], bins + 1)
    cdf = norm.cdf(edges[None, :] - field.means.reshape(-1, 1))
    pmf = np.diff(cdf, axis=1)
    return DensityField(pmf=pmf / pmf.sum(axis=1, keepdims=True))


def sample_gaussian_histograms(
    field: GaussianField,
    samples_per_cell: int,
    rng: np.random.Generator,
    bins: int = DEFAULT_NUM_BINS,
) -> np.ndarray:
    """``samples_per_cell`` binned draws per site from the true densities."""
    pmf = true_densities(field, bins).pmf
    return rng.multinomial(samples_per_cell, pmf)
