import numpy as np
from scipy.spatial import cKDTree

from spatialdensity.exceptions import InvalidDimensionError, NumericInputError
from spatialdensity.solvers.gfl import SplitProblem

TRUNCATION_BANDWIDTHS = 3.0


def gaussian_kernel_smooth(problem: SplitProblem, coords, bandwidth: float) -> np.ndarray:
    """
    Kernel-weighted split rates.

    Site ``t`` contributes to site ``s`` with weight ``exp(-0.5 * d(s, t) / c) * m_t``
    when ``d(s, t) <= 3c`` (distances in cells), so the smoothed rate is
    ``sum_t k_st y_t / sum_t k_st m_t``. Sites whose truncated neighbourhood
    holds no trials get the pooled rate of all sites.
    """
    coords = np.asarray(coords, dtype=float)
    p = problem.num_sites
    if coords.shape != (p, 2):
        raise InvalidDimensionError(f"coords must have shape ({p}, 2), got {coords.shape}")
    if not np.all(np.isfinite(coords)):
        raise NumericInputError("coords must be finite")
    if not bandwidth > 0:
        raise NumericInputError(f"bandwidth must be positive, got {bandwidth}")

    radius = TRUNCATION_BANDWIDTHS * bandwidth
    pairs = cKDTree(coords).query_pairs(r=radius, output_type="ndarray")
    i = np.concatenate([np.arange(p), pairs[:, 0], pairs[:, 1]])
    j = np.concatenate([np.arange(p), pairs[:, 1], pairs[:, 0]])
    dist = np.linalg.norm(coords[i] - coords[j], axis=1)
    kernel = np.exp(-0.5 * dist / bandwidth)

    num = np.bincount(i, weights=kernel * problem.y[j], minlength=p)
    den = np.bincount(i, weights=kernel * problem.m[j], minlength=p)

    total = problem.total_trials
    pooled = problem.y.sum() / total if total > 0 else 0.5
    rates = np.full(p, pooled)
    has_data = den > 0
    rates[has_data] = num[has_data] / den[has_data]
    return np.clip(rates, 0.0, 1.0)
