# -*- coding: utf-8 -*-
"""
spatialdensity estimates a probability density at every site of a spatial
graph by splitting histograms along a dyadic tree and smoothing each split
probability across the graph.
"""

from .__version__ import __version__
from .config import ConfigManager, RunConfig, SolverOptions
from .density import DensityField, build_smoother, build_tree, count_tree, estimate_density
from .graph import Graph, build_grid_graph, decompose_trails
from .solvers import SplitProblem, fit_selected, solve_binomial_gfl


def fit(histograms, graph: Graph, smoother: str = "gfl", depth: int = 11, **options):
    """
    Estimates the density field of per-site ``histograms`` over ``graph``.

    Args:
        histograms: ``(p, bins)`` non-negative integer counts.
        graph (Graph): Sites and their adjacency.
        smoother (str): One of ``gfl``, ``gaussian-kernel``, ``l2``, ``mle``,
            ``bayes-gtf``.
        depth (int): Levels of the dyadic tree.
        **options: Further ``RunConfig`` fields (``seed``, ``workers``,
            ``solver``, ``bandwidth``, ...).

    Returns:
        DensityField: The estimated per-site pmfs.
    """
    config = RunConfig.from_dict({"smoother": smoother, **options})
    tree = build_tree(len(histograms[0]), depth)
    field, _ = estimate_density(
        count_tree(histograms, tree),
        graph,
        build_smoother(config),
        workers=config.workers,
        seed=config.seed,
    )
    return field


__all__ = [
    "ConfigManager",
    "DensityField",
    "Graph",
    "RunConfig",
    "SolverOptions",
    "SplitProblem",
    "__version__",
    "build_grid_graph",
    "decompose_trails",
    "fit",
    "fit_selected",
    "solve_binomial_gfl",
]
