from loguru import logger

from spatialdensity.config import RunConfig
from spatialdensity.constants import HISTOGRAM_FILE, RECORDS_FILE, TRUTH_FILE
from spatialdensity.data_loader.histograms import (
    format_density,
    format_histograms,
    format_records,
)
from spatialdensity.exceptions import InvalidConfigError
from spatialdensity.graph.base import format_edge_list
from spatialdensity.helpers.filemanager import FileManager
from spatialdensity.helpers.rng import substream
from spatialdensity.radsim.scenario import (
    Scenario,
    build_radiological_scenario,
    sample_observations,
    sample_records,
)

GRAPH_FILE = "graph.txt"


def run_simulate(config: RunConfig, file_manager: FileManager) -> Scenario:
    """
    Builds the configured radiological scenario and writes the true densities,
    one dwell-time histogram per site, the grid's edge list and, when
    ``scenario.record_seconds`` is set, one-second records.
    """
    if config.scenario is None:
        raise InvalidConfigError("the simulate subcommand needs a scenario section")
    scenario_config = config.scenario
    scenario = build_radiological_scenario(scenario_config, config.inputs.spectra_dir)
    seed = config.seed

    histograms = sample_observations(
        scenario, scenario_config.dwell, substream(seed, "simulate", "histograms")
    )
    file_manager.write(HISTOGRAM_FILE, format_histograms(histograms))
    file_manager.write(TRUTH_FILE, format_density(scenario.densities().pmf))
    file_manager.write(
        GRAPH_FILE,
        format_edge_list(
            scenario.graph, header=[f"grid={scenario.rows}x{scenario.cols}"]
        ),
    )

    if scenario_config.record_seconds > 0:
        records = sample_records(
            scenario,
            scenario_config.record_seconds,
            substream(seed, "simulate", "records"),
        )
        file_manager.write(RECORDS_FILE, format_records(records))

    logger.info(
        f"Simulated {scenario.num_sites} sites with {len(scenario.sources)} sources, "
        f"mean total rate {scenario.total_rates.mean():.4g} counts/s"
    )
    return scenario
