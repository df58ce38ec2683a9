from typing import Dict, List

import numpy as np
import pandas as pd
from loguru import logger

from spatialdensity.config import RunConfig
from spatialdensity.constants import BENCH_FILE
from spatialdensity.density.field import DensityField, error_summary, max_cdf_errors
from spatialdensity.exceptions import InvalidConfigError
from spatialdensity.graph.base import Graph
from spatialdensity.helpers.filemanager import FileManager
from spatialdensity.helpers.rng import child_seed, substream
from spatialdensity.radsim.gaussian import (
    build_gaussian_field,
    sample_gaussian_histograms,
    true_densities,
)
from spatialdensity.radsim.scenario import build_radiological_scenario, sample_observations

from .fit import fit_histograms

BENCH_COLUMNS = ["method", "setting", "mean_error", "worst_error"]


def _score_methods(
    config: RunConfig,
    histograms: np.ndarray,
    graph: Graph,
    truth: DensityField,
    seed: int,
) -> Dict[str, Dict[str, float]]:
    scores = {}
    for method in config.bench.methods:
        method_config = config.model_copy(update={"smoother": method})
        estimate, _ = fit_histograms(histograms, graph, method_config, seed=seed)
        scores[method] = error_summary(max_cdf_errors(estimate, truth))
    return scores


def _average(rows: List[Dict[str, float]]) -> Dict[str, float]:
    return {
        "mean_error": float(np.mean([r["mean_error"] for r in rows])),
        "worst_error": float(np.mean([r["worst_error"] for r in rows])),
    }


def gaussian_bench(config: RunConfig) -> pd.DataFrame:
    """Max-CDF reconstruction errors on random Gaussian mean surfaces."""
    bench, gaussian = config.bench, config.gaussian
    bins = config.tree.bins
    rows = []
    for n in gaussian.samples_per_cell:
        per_method: Dict[str, List[Dict[str, float]]] = {m: [] for m in bench.methods}
        for r in range(bench.replicates):
            field = build_gaussian_field(
                gaussian.family, gaussian.rows, gaussian.cols, substream(config.seed, "field", r)
            )
            histograms = sample_gaussian_histograms(
                field, n, substream(config.seed, "samples", n, r), bins=bins
            )
            scores = _score_methods(
                config,
                histograms,
                field.graph,
                true_densities(field, bins),
                child_seed(substream(config.seed, "fit", n, r)),
            )
            for method, score in scores.items():
                per_method[method].append(score)
        for method in bench.methods:
            rows.append({"method": method, "setting": f"n={n}", **_average(per_method[method])})
        logger.info(f"Benchmarked {gaussian.family} fields at {n} samples per cell")
    return pd.DataFrame(rows, columns=BENCH_COLUMNS)


def radiological_bench(config: RunConfig) -> pd.DataFrame:
    """Max-CDF reconstruction errors of the scenario's densities per dwell time."""
    if config.scenario is None:
        raise InvalidConfigError("the radiological benchmark needs a scenario section")
    scenario = build_radiological_scenario(config.scenario, config.inputs.spectra_dir)
    truth = scenario.densities()
    graph = scenario.graph
    rows = []
    for dwell in config.bench.dwell_times:
        per_method: Dict[str, List[Dict[str, float]]] = {m: [] for m in config.bench.methods}
        for r in range(config.bench.replicates):
            histograms = sample_observations(
                scenario, dwell, substream(config.seed, "dwell", f"{dwell:g}", r)
            )
            scores = _score_methods(
                config,
                histograms,
                graph,
                truth,
                child_seed(substream(config.seed, "fit", f"{dwell:g}", r)),
            )
            for method, score in scores.items():
                per_method[method].append(score)
        for method in config.bench.methods:
            rows.append(
                {"method": method, "setting": f"T={dwell:g}", **_average(per_method[method])}
            )
        logger.info(f"Benchmarked the radiological scenario at T={dwell:g} s")
    return pd.DataFrame(rows, columns=BENCH_COLUMNS)


def run_bench(config: RunConfig, file_manager: FileManager) -> pd.DataFrame:
    if config.bench.kind == "gaussian":
        table = gaussian_bench(config)
    else:
        table = radiological_bench(config)
    file_manager.write_frame(BENCH_FILE, table)
    return table
