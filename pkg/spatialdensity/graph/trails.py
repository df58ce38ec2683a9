from dataclasses import dataclass
from typing import List, Tuple

import networkx as nx
import numpy as np

from spatialdensity.graph.base import Graph


@dataclass(frozen=True)
class TrailDecomposition:
    """
    Edge-disjoint trails covering every edge of a graph exactly once.

    Each trail is an ordered vertex sequence whose consecutive pairs are
    graph edges.
    """

    trails: Tuple[Tuple[int, ...], ...]
    num_vertices: int

    def __len__(self) -> int:
        return len(self.trails)

    @property
    def num_occurrences(self) -> int:
        """Total number of trail-vertex occurrences (one slack variable each)."""
        return sum(len(t) for t in self.trails)

    def edge_pairs(self) -> np.ndarray:
        """All consecutive pairs, lower endpoint first, in trail order."""
        pairs = [
            (min(a, b), max(a, b))
            for trail in self.trails
            for a, b in zip(trail[:-1], trail[1:])
        ]
        return np.array(pairs, dtype=np.int64).reshape(-1, 2)


def _component_trails(multigraph: nx.MultiGraph, nodes: List[int]) -> List[List[int]]:
    component = multigraph.subgraph(nodes).copy()
    odd = sorted(v for v, deg in component.degree() if deg % 2 == 1)

    # Pair odd vertices in ascending order with virtual edges; the augmented
    # component is Eulerian.
    for a, b in zip(odd[0::2], odd[1::2]):
        component.add_edge(a, b, virtual=True)

    start = odd[0] if odd else min(nodes)
    circuit = list(nx.eulerian_circuit(component, source=start, keys=True))

    if not odd:
        return [[circuit[0][0]] + [v for _, v, _ in circuit]]

    # Rotate so the circuit begins right after a virtual edge, then cut at
    # every virtual edge.
    first_virtual = next(
        i for i, (u, v, k) in enumerate(circuit) if component.edges[u, v, k].get("virtual")
    )
    circuit = circuit[first_virtual + 1 :] + circuit[: first_virtual + 1]

    trails: List[List[int]] = []
    current: List[int] = []
    for u, v, k in circuit:
        if component.edges[u, v, k].get("virtual"):
            if current:
                trails.append(current)
            current = []
            continue
        if not current:
            current = [u]
        current.append(v)
    if current:
        trails.append(current)
    return trails


def decompose_trails(graph: Graph) -> TrailDecomposition:
    """
    Decomposes ``graph`` into edge-disjoint trails.

    Each connected component with edges is handled independently: its odd
    vertices are paired in ascending index order by virtual edges, an
    Eulerian circuit is found with Hierholzer's algorithm, and the circuit
    is cut at the virtual edges. A component with ``2k`` odd vertices yields
    ``max(1, k)`` trails. Isolated vertices contribute no trail.
    """
    if graph.num_edges == 0:
        return TrailDecomposition(trails=(), num_vertices=graph.num_vertices)

    multigraph = nx.MultiGraph()
    multigraph.add_nodes_from(range(graph.num_vertices))
    multigraph.add_edges_from((int(u), int(v), {"virtual": False}) for u, v in graph.edges)

    trails: List[Tuple[int, ...]] = []
    components = sorted(
        (sorted(c) for c in nx.connected_components(multigraph) if len(c) > 1),
        key=lambda c: c[0],
    )
    for nodes in components:
        trails.extend(tuple(t) for t in _component_trails(multigraph, nodes))

    return TrailDecomposition(trails=tuple(trails), num_vertices=graph.num_vertices)
