from dataclasses import dataclass
from typing import Dict, Mapping

import numpy as np

from spatialdensity.constants import PROB_EPS
from spatialdensity.exceptions import InvalidDimensionError, NumericInputError

from .tree import DyadicTree


@dataclass(frozen=True)
class DensityField:
    """Per-site probability mass functions over a common bin grid, one row per site."""

    pmf: np.ndarray

    def __post_init__(self):
        pmf = np.asarray(self.pmf, dtype=float)
        if pmf.ndim != 2:
            raise InvalidDimensionError(f"pmf must be 2-D (sites x bins), got {pmf.shape}")
        pmf.setflags(write=False)
        object.__setattr__(self, "pmf", pmf)

    @property
    def num_sites(self) -> int:
        return int(self.pmf.shape[0])

    @property
    def num_bins(self) -> int:
        return int(self.pmf.shape[1])

    @property
    def cdf(self) -> np.ndarray:
        cdf = np.cumsum(self.pmf, axis=1)
        # exact 1 at the last bin boundary
        cdf[:, -1] = 1.0
        return np.minimum(cdf, 1.0)

    def site(self, s: int) -> np.ndarray:
        return self.pmf[s]

    def expected_counts(self, s: int, total: float) -> np.ndarray:
        return total * self.pmf[s]


def merge_to_densities(
    w_hat: Mapping[str, np.ndarray], tree: DyadicTree
) -> DensityField:
    """
    Multiplies split probabilities along every root-to-leaf path.

    A leaf's mass is spread evenly over its ``leaf_width`` bins. Split
    probabilities are clamped to ``[eps, 1 - eps]`` first.
    """
    if "" not in w_hat:
        raise InvalidDimensionError("split probabilities for the root node are missing")
    p = np.atleast_1d(np.asarray(w_hat[""])).shape[0]
    mass = np.ones((p, 1))
    for labels in tree.levels():
        missing = [g for g in labels if g not in w_hat]
        if missing:
            raise InvalidDimensionError(f"split probabilities missing for nodes {missing[:5]}")
        w = np.column_stack([np.asarray(w_hat[g], dtype=float) for g in labels])
        if not np.all(np.isfinite(w)):
            raise NumericInputError("split probabilities must be finite")
        w = np.clip(w, PROB_EPS, 1.0 - PROB_EPS)
        mass = np.stack([mass * w, mass * (1.0 - w)], axis=2).reshape(p, -1)

    pmf = np.repeat(mass / tree.leaf_width, tree.leaf_width, axis=1)
    return DensityField(pmf=pmf)


def _as_cdf(values) -> np.ndarray:
    if isinstance(values, DensityField):
        return values.cdf
    return np.asarray(values, dtype=float)


def max_cdf_distance(est_cdf, truth_cdf) -> float:
    """``max_x |F(x) - G(x)|`` over bin boundaries of two CDFs on one grid."""
    est = np.asarray(est_cdf, dtype=float)
    truth = np.asarray(truth_cdf, dtype=float)
    if est.shape != truth.shape:
        raise InvalidDimensionError(
            f"CDFs are on different grids: {est.shape} vs {truth.shape}"
        )
    return float(np.max(np.abs(est - truth)))


def max_cdf_errors(est, truth) -> np.ndarray:
    """Per-site max-CDF distance between two fields (or CDF matrices)."""
    est_cdf, truth_cdf = _as_cdf(est), _as_cdf(truth)
    if est_cdf.shape != truth_cdf.shape:
        raise InvalidDimensionError(
            f"fields are on different grids: {est_cdf.shape} vs {truth_cdf.shape}"
        )
    return np.max(np.abs(est_cdf - truth_cdf), axis=1)


def error_summary(errors) -> Dict[str, float]:
    errors = np.asarray(errors, dtype=float)
    return {"mean_error": float(errors.mean()), "worst_error": float(errors.max())}


def empirical_field(histograms) -> DensityField:
    """Normalised histograms; rows without counts become uniform."""
    counts = np.asarray(histograms, dtype=float)
    totals = counts.sum(axis=1, keepdims=True)
    uniform = np.full_like(counts, 1.0 / counts.shape[1])
    pmf = np.divide(counts, totals, out=uniform, where=totals > 0)
    return DensityField(pmf=pmf)
