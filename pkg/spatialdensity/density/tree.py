from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterator, List, Tuple

import numpy as np

from spatialdensity.exceptions import InvalidDimensionError, NumericInputError
from spatialdensity.graph.base import Graph
from spatialdensity.solvers.gfl import SplitProblem


@dataclass(frozen=True)
class DyadicTree:
    """
    Recursive halving of ``num_bins`` energy bins, ``depth`` levels deep.

    Nodes are labelled by binary strings: ``""`` is the root and ``g + "0"``
    / ``g + "1"`` are the left and right halves of node ``g``. Leaves are the
    ``2**depth`` labels of length ``depth``, each spanning ``leaf_width`` bins.
    """

    num_bins: int
    depth: int

    @property
    def num_leaves(self) -> int:
        return 2**self.depth

    @property
    def leaf_width(self) -> int:
        return self.num_bins // self.num_leaves

    @cached_property
    def nonterminal_nodes(self) -> List[str]:
        """Internal labels, shallow levels first, lexicographic within a level."""
        labels = [""]
        for level in range(1, self.depth):
            labels.extend(format(i, f"0{level}b") for i in range(2**level))
        return labels

    def levels(self) -> Iterator[List[str]]:
        for level in range(self.depth):
            if level == 0:
                yield [""]
            else:
                yield [format(i, f"0{level}b") for i in range(2**level)]

    def bin_range(self, label: str) -> Tuple[int, int]:
        """Half-open bin interval ``[start, stop)`` of a node."""
        if len(label) > self.depth or any(ch not in "01" for ch in label):
            raise InvalidDimensionError(f"'{label}' is not a node of a depth-{self.depth} tree")
        width = self.num_bins >> len(label)
        start = int(label, 2) * width if label else 0
        return start, start + width

    def children(self, label: str) -> Tuple[str, str]:
        if len(label) >= self.depth:
            raise InvalidDimensionError(f"Leaf '{label}' has no children")
        return label + "0", label + "1"

    def is_leaf(self, label: str) -> bool:
        return len(label) == self.depth


def build_tree(num_bins: int, depth: int) -> DyadicTree:
    """
    Raises:
        InvalidDimensionError: ``num_bins`` is not a positive multiple of ``2**depth``.
    """
    if depth < 1:
        raise InvalidDimensionError(f"depth must be >= 1, got {depth}")
    if num_bins < 1 or num_bins % (2**depth) != 0:
        raise InvalidDimensionError(
            f"num_bins={num_bins} is not divisible by 2^depth={2**depth}"
        )
    return DyadicTree(num_bins=num_bins, depth=depth)


@dataclass(frozen=True)
class NodeCounts:
    """Per internal node: left-child counts ``y`` and node counts ``m`` per site."""

    tree: DyadicTree
    y: Dict[str, np.ndarray]
    m: Dict[str, np.ndarray]

    @property
    def num_sites(self) -> int:
        return int(self.m[""].shape[0])

    @property
    def totals(self) -> np.ndarray:
        return self.m[""]

    def problem(self, label: str, graph: Graph) -> SplitProblem:
        return SplitProblem(y=self.y[label], m=self.m[label], graph=graph)

    def is_empty(self, label: str) -> bool:
        return not np.any(self.m[label] > 0)


def _check_histograms(histograms, num_bins: int) -> np.ndarray:
    counts = np.asarray(histograms)
    if counts.ndim == 1:
        counts = counts[None, :]
    if counts.ndim != 2 or counts.shape[1] != num_bins:
        raise InvalidDimensionError(
            f"histograms must have {num_bins} columns, got shape {counts.shape}"
        )
    if not np.all(np.isfinite(counts)):
        raise NumericInputError("histogram counts must be finite")
    if np.any(counts < 0):
        sites = np.flatnonzero(np.any(counts < 0, axis=1))
        raise NumericInputError(f"negative counts at sites {sites.tolist()}")
    if np.any(counts != np.rint(counts)):
        raise NumericInputError("histogram counts must be integers")
    return counts.astype(np.int64)


def count_tree(histograms, tree: DyadicTree) -> NodeCounts:
    """
    Splits per-site histograms into binomial counts at every internal node.

    Args:
        histograms: ``(p, num_bins)`` non-negative integer counts.
        tree (DyadicTree): Partition of the bins.
    """
    counts = _check_histograms(histograms, tree.num_bins)
    cumulative = np.zeros((counts.shape[0], tree.num_bins + 1), dtype=np.int64)
    np.cumsum(counts, axis=1, out=cumulative[:, 1:])

    y: Dict[str, np.ndarray] = {}
    m: Dict[str, np.ndarray] = {}
    for label in tree.nonterminal_nodes:
        start, stop = tree.bin_range(label)
        mid = (start + stop) // 2
        m[label] = cumulative[:, stop] - cumulative[:, start]
        y[label] = cumulative[:, mid] - cumulative[:, start]
    return NodeCounts(tree=tree, y=y, m=m)
