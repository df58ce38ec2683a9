from typing import Optional

import numpy as np
from loguru import logger

from spatialdensity.config import RunConfig
from spatialdensity.data_loader.histograms import read_histograms
from spatialdensity.data_loader.ingest import ingest_file, restrict_channels
from spatialdensity.data_loader.records import Records
from spatialdensity.exceptions import InvalidConfigError, InvalidDimensionError
from spatialdensity.graph.base import Graph, build_grid_graph, read_edge_list


def load_histograms(config: RunConfig) -> np.ndarray:
    """
    Per-site histograms from ``inputs.histograms`` or, failing that, the
    summed rows of ``inputs.records``; the channel rule is applied either way.
    """
    if config.inputs.histograms is not None:
        config.check_inputs("histograms")
        histograms = read_histograms(config.inputs.histograms)
        return restrict_channels(histograms, config.channels)
    if config.inputs.records is not None:
        return load_records(config).histograms()
    raise InvalidConfigError("inputs.histograms or inputs.records is required")


def load_records(config: RunConfig, num_sites: Optional[int] = None) -> Records:
    config.check_inputs("records")
    records = ingest_file(config.inputs.records, num_sites, config.channels)
    logger.info(f"Ingested {len(records)} records over {records.num_sites} sites")
    return records


def load_graph(config: RunConfig, num_sites: int) -> Graph:
    """The edge-list graph when given, else the configured grid."""
    if config.inputs.graph is not None:
        config.check_inputs("graph")
        graph = read_edge_list(config.inputs.graph, num_vertices=num_sites)
        if config.grid is not None:
            grid = build_grid_graph(config.grid.rows, config.grid.cols)
            if grid.num_vertices == num_sites:
                graph = Graph(num_vertices=num_sites, edges=graph.edges, coords=grid.coords)
        return graph
    if config.grid is not None:
        graph = build_grid_graph(config.grid.rows, config.grid.cols)
    elif config.scenario is not None:
        graph = build_grid_graph(config.scenario.grid.rows, config.scenario.grid.cols)
    else:
        raise InvalidConfigError("inputs.graph or grid dimensions are required")
    if graph.num_vertices != num_sites:
        raise InvalidDimensionError(
            f"grid has {graph.num_vertices} cells but the data covers {num_sites} sites"
        )
    return graph
