from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np
from loguru import logger

from spatialdensity.constants import EMPTY_NODE_SPLIT
from spatialdensity.exceptions import NodeSmoothingError
from spatialdensity.graph.base import Graph
from spatialdensity.helpers.rng import substream
from spatialdensity.solvers.gfl import SplitProblem

from .field import DensityField, merge_to_densities
from .smoothers import NodeFit, Smoother
from .tree import NodeCounts


@dataclass
class SmoothedField:
    """Per-node fits of one smoothing run, keyed by node label."""

    fits: Dict[str, NodeFit]

    @property
    def w_hat(self) -> Dict[str, np.ndarray]:
        return {label: fit.w for label, fit in self.fits.items()}

    def diagnostics(self) -> List[dict]:
        return [self.fits[label].record(label) for label in sorted(self.fits, key=_job_order)]


def _job_order(label: str) -> Tuple[int, str]:
    return len(label), label


def _smooth_node(
    smoother: Smoother,
    label: str,
    y: np.ndarray,
    m: np.ndarray,
    graph: Graph,
    seed: int,
) -> NodeFit:
    try:
        if not np.any(m > 0):
            return NodeFit(w=np.full(graph.num_vertices, EMPTY_NODE_SPLIT))
        problem = SplitProblem(y=y, m=m, graph=graph)
        fit = smoother.smooth(problem, substream(seed, "node", label))
    except NodeSmoothingError:
        raise
    except Exception as e:
        raise NodeSmoothingError(label, e) from e
    logger.debug(f"Node '{label}': lambda={fit.lam}, df={fit.df}")
    return fit


def smooth_field(
    counts: NodeCounts,
    graph: Graph,
    smoother: Smoother,
    workers: int = 1,
    seed: int = 0,
) -> SmoothedField:
    """
    Smooths every internal node independently.

    Jobs are queued shallow levels first. Each node draws randomness from
    its own sub-stream, so results do not depend on ``workers``.

    Raises:
        NodeSmoothingError: A node failed; the error names the node.
    """
    smoother.prepare(graph)
    labels = sorted(counts.tree.nonterminal_nodes, key=_job_order)
    fits: Dict[str, NodeFit] = {}

    if workers <= 1:
        for label in labels:
            fits[label] = _smooth_node(
                smoother, label, counts.y[label], counts.m[label], graph, seed
            )
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            futures = {
                label: executor.submit(
                    _smooth_node,
                    smoother,
                    label,
                    counts.y[label],
                    counts.m[label],
                    graph,
                    seed,
                )
                for label in labels
            }
            for label in labels:
                fits[label] = futures[label].result()

    logger.info(f"Smoothed {len(fits)} nodes with the {smoother.type} smoother")
    return SmoothedField(fits=fits)


def estimate_density(
    counts: NodeCounts,
    graph: Graph,
    smoother: Smoother,
    workers: int = 1,
    seed: int = 0,
) -> Tuple[DensityField, SmoothedField]:
    """Split, smooth and merge: the full estimate for one set of histograms."""
    smoothed = smooth_field(counts, graph, smoother, workers=workers, seed=seed)
    return merge_to_densities(smoothed.w_hat, counts.tree), smoothed
