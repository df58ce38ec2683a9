from .field import (
    DensityField,
    empirical_field,
    error_summary,
    max_cdf_distance,
    max_cdf_errors,
    merge_to_densities,
)
from .pipeline import SmoothedField, estimate_density, smooth_field
from .smoothers import (
    BayesGtfSmoother,
    GaussianKernelSmoother,
    GflSmoother,
    L2Smoother,
    MleSmoother,
    NodeFit,
    Smoother,
    build_smoother,
)
from .tree import DyadicTree, NodeCounts, build_tree, count_tree

__all__ = [
    "BayesGtfSmoother",
    "DensityField",
    "DyadicTree",
    "GaussianKernelSmoother",
    "GflSmoother",
    "L2Smoother",
    "MleSmoother",
    "NodeCounts",
    "NodeFit",
    "SmoothedField",
    "Smoother",
    "build_smoother",
    "build_tree",
    "count_tree",
    "empirical_field",
    "error_summary",
    "estimate_density",
    "max_cdf_distance",
    "max_cdf_errors",
    "merge_to_densities",
    "smooth_field",
]
