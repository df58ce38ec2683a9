from .base import (
    Graph,
    build_chain_graph,
    build_grid_graph,
    grid_shape_of,
    read_edge_list,
    write_edge_list,
)
from .trails import TrailDecomposition, decompose_trails

__all__ = [
    "Graph",
    "TrailDecomposition",
    "build_chain_graph",
    "build_grid_graph",
    "decompose_trails",
    "grid_shape_of",
    "read_edge_list",
    "write_edge_list",
]
