import json
from typing import Any, Dict, Optional, Tuple

import numpy as np
from loguru import logger

from spatialdensity.config import RunConfig
from spatialdensity.constants import DENSITY_FILE, DIAGNOSTICS_FILE
from spatialdensity.data_loader.histograms import format_density
from spatialdensity.density.field import DensityField
from spatialdensity.density.pipeline import SmoothedField, estimate_density
from spatialdensity.density.smoothers import build_smoother
from spatialdensity.density.tree import build_tree, count_tree
from spatialdensity.graph.base import Graph
from spatialdensity.helpers.filemanager import FileManager
from spatialdensity.helpers.json_encoder import NumpyJsonEncoder

from .inputs import load_graph, load_histograms


def fit_histograms(
    histograms: np.ndarray,
    graph: Graph,
    config: RunConfig,
    seed: Optional[int] = None,
) -> Tuple[DensityField, SmoothedField]:
    """Estimates the density field of ``histograms`` with the configured smoother."""
    tree = build_tree(histograms.shape[1], config.tree.depth)
    counts = count_tree(histograms, tree)
    return estimate_density(
        counts,
        graph,
        build_smoother(config),
        workers=config.workers,
        seed=config.seed if seed is None else seed,
    )


def diagnostics_document(config: RunConfig, smoothed: SmoothedField) -> str:
    document: Dict[str, Any] = {
        "smoother": config.smoother,
        "seed": config.seed,
        "depth": config.tree.depth,
        "nodes": smoothed.diagnostics(),
    }
    return json.dumps(document, cls=NumpyJsonEncoder, sort_keys=True, indent=2) + "\n"


def run_fit(config: RunConfig, file_manager: FileManager) -> DensityField:
    """
    Fits the density field and writes ``density.txt`` and ``diagnostics.json``.
    """
    histograms = load_histograms(config)
    graph = load_graph(config, histograms.shape[0])
    logger.info(
        f"Fitting {histograms.shape[0]} sites x {histograms.shape[1]} bins "
        f"with the {config.smoother} smoother (depth {config.tree.depth})"
    )
    field, smoothed = fit_histograms(histograms, graph, config)

    file_manager.write(DENSITY_FILE, format_density(field.pmf))
    file_manager.write(DIAGNOSTICS_FILE, diagnostics_document(config, smoothed))
    logger.info(f"Wrote {file_manager.abs_path(DENSITY_FILE)}")
    return field
