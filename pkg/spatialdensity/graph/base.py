import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components

from spatialdensity.exceptions import (
    InputFileError,
    InvalidDimensionError,
    InvalidGraphError,
)


@dataclass(frozen=True)
class Graph:
    """
    Undirected site graph.

    Edges are stored as an ``(d, 2)`` integer array with the lower endpoint
    first. Instances are immutable and safe to share between threads.
    """

    num_vertices: int
    edges: np.ndarray = field(default_factory=lambda: np.zeros((0, 2), dtype=np.int64))
    coords: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.num_vertices < 0:
            raise InvalidGraphError("num_vertices must be non-negative")

        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if edges.size:
            if edges.min() < 0 or edges.max() >= self.num_vertices:
                raise InvalidGraphError(
                    f"Edge endpoint outside [0, {self.num_vertices})"
                )
            if np.any(edges[:, 0] == edges[:, 1]):
                loops = edges[edges[:, 0] == edges[:, 1], 0]
                raise InvalidGraphError(f"Self-loops are not allowed: {loops.tolist()}")
            edges = np.sort(edges, axis=1)
            unique = np.unique(edges, axis=0)
            if len(unique) != len(edges):
                raise InvalidGraphError("Duplicate edges are not allowed")
        edges.setflags(write=False)
        object.__setattr__(self, "edges", edges)

        if self.coords is not None:
            coords = np.asarray(self.coords, dtype=float)
            if coords.shape != (self.num_vertices, 2):
                raise InvalidDimensionError(
                    f"coords must have shape ({self.num_vertices}, 2), got {coords.shape}"
                )
            coords.setflags(write=False)
            object.__setattr__(self, "coords", coords)

    # dataclass(eq) would compare arrays elementwise
    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.num_vertices == other.num_vertices and np.array_equal(
            self.edges, other.edges
        )

    def __hash__(self):
        return hash((self.num_vertices, self.edges.tobytes()))

    @property
    def num_edges(self) -> int:
        return int(self.edges.shape[0])

    @cached_property
    def _adjacency(self) -> sparse.csr_matrix:
        p = self.num_vertices
        if self.num_edges == 0:
            return sparse.csr_matrix((p, p), dtype=np.int8)
        rows = np.concatenate([self.edges[:, 0], self.edges[:, 1]])
        cols = np.concatenate([self.edges[:, 1], self.edges[:, 0]])
        data = np.ones(len(rows), dtype=np.int8)
        return sparse.csr_matrix((data, (rows, cols)), shape=(p, p))

    def adjacency(self) -> sparse.csr_matrix:
        """Symmetric 0/1 adjacency matrix."""
        return self._adjacency

    def degree(self) -> np.ndarray:
        """Vertex degrees."""
        return np.bincount(self.edges.ravel(), minlength=self.num_vertices)

    def neighbors(self, v: int) -> np.ndarray:
        adj = self._adjacency
        return adj.indices[adj.indptr[v] : adj.indptr[v + 1]]

    def components(self) -> Tuple[int, np.ndarray]:
        """Number of connected components and the component label per vertex."""
        if self.num_vertices == 0:
            return 0, np.zeros(0, dtype=np.int64)
        n, labels = connected_components(self._adjacency, directed=False)
        return int(n), labels

    def is_connected(self) -> bool:
        return self.components()[0] <= 1


def build_grid_graph(rows: int, cols: int) -> Graph:
    """
    Builds the 4-neighbour lattice on a ``rows x cols`` grid.

    Vertices are numbered row-major (``v = row * cols + col``) and carry
    ``(row, col)`` coordinates.
    """
    if rows < 1 or cols < 1:
        raise InvalidDimensionError(
            f"Grid dimensions must be positive, got {rows}x{cols}"
        )

    index = np.arange(rows * cols).reshape(rows, cols)
    horizontal = np.column_stack([index[:, :-1].ravel(), index[:, 1:].ravel()])
    vertical = np.column_stack([index[:-1, :].ravel(), index[1:, :].ravel()])
    edges = np.vstack([horizontal, vertical])

    rr, cc = np.divmod(np.arange(rows * cols), cols)
    coords = np.column_stack([rr, cc]).astype(float)
    return Graph(num_vertices=rows * cols, edges=edges, coords=coords)


def build_chain_graph(n: int) -> Graph:
    """Path graph on ``n`` vertices."""
    return build_grid_graph(1, n)


def grid_shape_of(graph: Graph) -> Optional[Tuple[int, int]]:
    """Recovers ``(rows, cols)`` for graphs built by ``build_grid_graph``."""
    if graph.coords is None or graph.num_vertices == 0:
        return None
    rows = int(graph.coords[:, 0].max()) + 1
    cols = int(graph.coords[:, 1].max()) + 1
    return (rows, cols) if rows * cols == graph.num_vertices else None


def parse_edge_list(lines: Iterable[str]) -> List[Tuple[int, int]]:
    edges = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise InvalidGraphError(f"Line {lineno}: expected 'u v', got '{line}'")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError as e:
            raise InvalidGraphError(f"Line {lineno}: {e}") from e
    return edges


def read_edge_list(path: str, num_vertices: Optional[int] = None) -> Graph:
    """
    Reads an edge-list file: one ``u v`` pair per line, 0-indexed,
    ``#`` comments ignored.
    """
    if not os.path.isfile(path):
        raise InputFileError(path, "edge list not found")
    with open(path, "r", encoding="utf-8") as f:
        edges = parse_edge_list(f)
    if num_vertices is None:
        num_vertices = 1 + max((max(e) for e in edges), default=-1)
    return Graph(num_vertices=num_vertices, edges=np.array(edges, dtype=np.int64).reshape(-1, 2))


def format_edge_list(graph: Graph, header: Sequence[str] = ()) -> str:
    lines = [f"# {h}" for h in header]
    lines += [f"{u} {v}" for u, v in graph.edges.tolist()]
    return "\n".join(lines) + "\n"


def write_edge_list(graph: Graph, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(format_edge_list(graph, header=[f"vertices={graph.num_vertices}"]))
