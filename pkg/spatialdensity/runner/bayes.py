import pandas as pd
from loguru import logger

from spatialdensity.bayes.gibbs import select_lambda_dic
from spatialdensity.bayes.penalty import build_penalty_matrix
from spatialdensity.config import RunConfig
from spatialdensity.constants import POSTERIOR_FILE
from spatialdensity.density.tree import build_tree, count_tree
from spatialdensity.exceptions import InvalidConfigError
from spatialdensity.helpers.filemanager import FileManager
from spatialdensity.helpers.rng import substream

from .inputs import load_graph, load_histograms


def run_bayes(config: RunConfig, file_manager: FileManager) -> pd.DataFrame:
    """
    Bayesian trend filtering of one tree node's splitting probabilities;
    writes per-site posterior mean and 90% band of ``w`` to ``posterior.csv``.
    """
    histograms = load_histograms(config)
    graph = load_graph(config, histograms.shape[0])
    tree = build_tree(histograms.shape[1], config.tree.depth)
    node = config.bayes.node
    if node not in tree.nonterminal_nodes:
        raise InvalidConfigError(
            f"node '{node}' is not an internal node of a depth-{tree.depth} tree"
        )

    problem = count_tree(histograms, tree).problem(node, graph)
    penalty = build_penalty_matrix(graph, config.bayes.order)
    lam, samples = select_lambda_dic(
        problem,
        penalty,
        sorted(config.bayes.lambda_grid, reverse=True),
        config.bayes.sweeps,
        config.bayes.burn_in,
        substream(config.seed, "bayes", node),
    )
    mean, q05, q95 = samples.summary()
    table = pd.DataFrame({"site": range(graph.num_vertices), "mean": mean, "q05": q05, "q95": q95})
    file_manager.write_frame(POSTERIOR_FILE, table)
    logger.info(f"Node '{node}': DIC selected lambda={lam:.6g} (K={config.bayes.order})")
    return table
