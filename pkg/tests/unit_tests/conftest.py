import numpy as np
import pytest

from spatialdensity.config import ConfigManager, RunConfig
from spatialdensity.data_loader.records import Records
from spatialdensity.graph.base import Graph, build_chain_graph, build_grid_graph
from spatialdensity.solvers.gfl import SplitProblem


@pytest.fixture
def grid_3x3() -> Graph:
    return build_grid_graph(3, 3)


@pytest.fixture
def two_site_graph() -> Graph:
    return build_chain_graph(2)


@pytest.fixture
def blocky_problem() -> SplitProblem:
    """A 4x4 grid whose left half splits left 20% of the time and right half 80%."""
    graph = build_grid_graph(4, 4)
    m = np.full(16, 50.0)
    cols = np.arange(16) % 4
    y = np.where(cols < 2, 10.0, 40.0)
    return SplitProblem(y=y, m=m, graph=graph)


@pytest.fixture
def small_histograms() -> np.ndarray:
    """Six sites on a 2x3 grid, eight bins, two spectral shapes."""
    rng = np.random.default_rng(7)
    low = np.array([8, 6, 4, 2, 1, 1, 1, 1], dtype=float)
    high = low[::-1]
    shapes = [low, low, low, high, high, high]
    return np.vstack([rng.multinomial(200, s / s.sum()) for s in shapes])


@pytest.fixture
def small_records() -> Records:
    """Four sites, eight bins, 30 one-second records per site."""
    rng = np.random.default_rng(11)
    pmf = np.array([4, 3, 2, 1, 1, 1, 1, 1], dtype=float)
    pmf /= pmf.sum()
    sites = np.repeat(np.arange(4), 30)
    counts = np.vstack([rng.multinomial(rng.poisson(20), pmf) for _ in sites])
    return Records(sites=sites, counts=counts, num_sites=4)


@pytest.fixture(autouse=True)
def reset_config_manager():
    ConfigManager._config = RunConfig()
    yield
    ConfigManager._config = RunConfig()
