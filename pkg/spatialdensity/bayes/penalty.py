from dataclasses import dataclass

import numpy as np
from scipy import sparse

from spatialdensity.exceptions import UnsupportedOrderError
from spatialdensity.graph.base import Graph

SUPPORTED_ORDERS = (0, 1, 2)


@dataclass(frozen=True)
class PenaltyMatrix:
    """
    Graph trend filtering difference operator of order ``K + 1``.

    ``K = 0`` is the oriented incidence matrix (``d x p``), ``K = 1`` the
    graph Laplacian (``p x p``) and ``K = 2`` the incidence matrix times the
    Laplacian (``d x p``).
    """

    order: int
    matrix: sparse.csr_matrix

    @property
    def num_rows(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def num_sites(self) -> int:
        return int(self.matrix.shape[1])

    def apply(self, beta) -> np.ndarray:
        return self.matrix @ np.asarray(beta, dtype=float)

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()


def incidence_matrix(graph: Graph) -> sparse.csr_matrix:
    """Oriented incidence: +1 on the lower-indexed endpoint, -1 on the other."""
    d, p = graph.num_edges, graph.num_vertices
    rows = np.repeat(np.arange(d), 2)
    cols = graph.edges.ravel()
    data = np.tile([1.0, -1.0], d)
    return sparse.csr_matrix((data, (rows, cols)), shape=(d, p))


def build_penalty_matrix(graph: Graph, order: int) -> PenaltyMatrix:
    """
    Builds the order-``K`` penalty matrix.

    Raises:
        UnsupportedOrderError: ``order`` is not 0, 1 or 2.
    """
    if order not in SUPPORTED_ORDERS:
        raise UnsupportedOrderError(order)

    delta = incidence_matrix(graph)
    if order == 0:
        matrix = delta
    elif order == 1:
        matrix = delta.T @ delta
    else:
        matrix = delta @ (delta.T @ delta)
    return PenaltyMatrix(order=order, matrix=sparse.csr_matrix(matrix))
