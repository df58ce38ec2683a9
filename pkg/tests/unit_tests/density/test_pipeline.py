import numpy as np
import pytest
from scipy.special import expit, logit

from spatialdensity.config import SolverOptions
from spatialdensity.density.field import empirical_field
from spatialdensity.density.pipeline import estimate_density, smooth_field
from spatialdensity.density.smoothers import GflSmoother, MleSmoother, NodeFit, Smoother
from spatialdensity.density.tree import build_tree, count_tree
from spatialdensity.exceptions import NodeSmoothingError
from spatialdensity.graph.base import Graph, build_grid_graph
from spatialdensity.solvers.gfl import SplitProblem, gfl_objective


class FailingSmoother(Smoother):
    @property
    def type(self) -> str:
        return "failing"

    def smooth(self, problem, rng) -> NodeFit:
        raise ValueError("boom")


def test_mle_single_site_reproduces_histogram():
    histograms = np.array([[3, 1, 2, 2, 5, 1, 4, 2]])
    graph = build_grid_graph(1, 1)
    field, _ = estimate_density(count_tree(histograms, build_tree(8, 3)), graph, MleSmoother())
    np.testing.assert_allclose(field.pmf, empirical_field(histograms).pmf, atol=1e-12)


def test_huge_lambda_shares_pooled_density(small_histograms):
    graph = build_grid_graph(2, 3)
    counts = count_tree(small_histograms, build_tree(8, 3))
    field, _ = estimate_density(counts, graph, GflSmoother(SolverOptions(lam=1e6)))
    pooled = small_histograms.sum(axis=0) / small_histograms.sum()
    for s in range(6):
        np.testing.assert_allclose(field.pmf[s], pooled, atol=1e-4)


def test_empty_nodes_split_evenly():
    histograms = np.array([[4, 4, 0, 0], [2, 6, 0, 0]])
    counts = count_tree(histograms, build_tree(4, 2))
    smoothed = smooth_field(counts, build_grid_graph(1, 2), MleSmoother())
    np.testing.assert_array_equal(smoothed.w_hat["1"], [0.5, 0.5])
    assert smoothed.fits["1"].lam is None


def test_diagnostics_are_shallow_first(small_histograms):
    counts = count_tree(small_histograms, build_tree(8, 3))
    smoothed = smooth_field(counts, build_grid_graph(2, 3), MleSmoother())
    assert [d["node"] for d in smoothed.diagnostics()] == ["", "0", "1", "00", "01", "10", "11"]


def test_failures_name_the_node(small_histograms):
    counts = count_tree(small_histograms, build_tree(8, 3))
    with pytest.raises(NodeSmoothingError) as exc_info:
        smooth_field(counts, build_grid_graph(2, 3), FailingSmoother())
    assert exc_info.value.node == ""


@pytest.mark.slow
def test_results_independent_of_workers(small_histograms):
    counts = count_tree(small_histograms, build_tree(8, 2))
    graph = build_grid_graph(2, 3)
    smoother = GflSmoother(SolverOptions(lambda_grid_size=5))
    serial, _ = estimate_density(counts, graph, smoother, workers=1, seed=9)
    parallel, _ = estimate_density(counts, graph, smoother, workers=2, seed=9)
    np.testing.assert_array_equal(serial.pmf, parallel.pmf)


def _two_block_oracle(y, m, left, cuts, lam):
    """Minimises the binomial loss plus ``lam * cuts * |b_left - b_right|`` by enumeration."""
    pooled = SplitProblem(
        y=[y[left].sum(), y[~left].sum()],
        m=[m[left].sum(), m[~left].sum()],
        graph=Graph(num_vertices=2, edges=[[0, 1]]),
    )
    penalty = lam * cuts
    candidates = [np.full(2, logit(pooled.y.sum() / pooled.m.sum()))]
    for sign in (-1.0, 1.0):
        rates = (pooled.y - sign * penalty * np.array([1.0, -1.0])) / pooled.m
        if np.all((rates > 0) & (rates < 1)):
            beta = logit(rates)
            if np.sign(beta[0] - beta[1]) == sign:
                candidates.append(beta)
    best = min(candidates, key=lambda b: gfl_objective(b, pooled, penalty))
    return np.where(left, expit(best[0]), expit(best[1]))


def test_gfl_recovers_two_region_plateaus_at_every_node():
    graph = build_grid_graph(4, 4)
    left = graph.coords[:, 1] < 2
    west, east = np.array([10, 20, 30, 40]), np.array([40, 30, 20, 10])
    histograms = np.where(left[:, None], west, east)
    counts = count_tree(histograms, build_tree(4, 2))
    cuts = int(np.sum(left[graph.edges[:, 0]] != left[graph.edges[:, 1]]))
    assert cuts == 4

    lam = 0.5
    smoothed = smooth_field(counts, graph, GflSmoother(SolverOptions(lam=lam)))
    assert sorted(smoothed.w_hat) == ["", "0", "1"]
    for label, w in smoothed.w_hat.items():
        expected = _two_block_oracle(counts.y[label], counts.m[label], left, cuts, lam)
        np.testing.assert_allclose(w, expected, atol=1e-6)
        assert len(np.unique(np.round(w, 6))) == 2
        assert smoothed.fits[label].df == 2.0
    # root: 240 of 800 left-half counts on the west side, pulled up by 4 * lam
    np.testing.assert_allclose(smoothed.w_hat[""][0], 242 / 800, atol=1e-6)
    np.testing.assert_allclose(smoothed.w_hat[""][-1], 558 / 800, atol=1e-6)
