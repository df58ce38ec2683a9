"""
Directional checks of the reconstruction and detection benchmarks at desk
scale. Every test here takes minutes.
"""

import numpy as np
import pytest

from spatialdensity.anomaly.injection import global_reference, train_test_split
from spatialdensity.anomaly.roc import References, roc_curve, run_detection
from spatialdensity.config import RunConfig, ScenarioConfig
from spatialdensity.radsim.scenario import build_radiological_scenario, sample_records
from spatialdensity.radsim.spectra import resolve_spectrum
from spatialdensity.runner.bench import gaussian_bench, radiological_bench
from spatialdensity.runner.fit import fit_histograms

TREE = {"bins": 32, "depth": 5}
SOLVER = {"lambda_grid_size": 10}


def _errors(table, column):
    return {
        (row.method, row.setting): getattr(row, column) for row in table.itertuples(index=False)
    }


@pytest.mark.slow
def test_gfl_beats_l2_and_mle_on_piecewise_constant_fields():
    wins = {"n=100": 0, "n=1000": 0}
    l2_wins = {"n=100": 0, "n=1000": 0}
    for seed in range(5):
        config = RunConfig(
            seed=seed,
            tree={"bins": 64, "depth": 6},
            solver=SOLVER,
            gaussian={"family": "piecewise-constant", "rows": 25, "cols": 25},
            bench={"methods": ["gfl", "l2", "mle"]},
        )
        errors = _errors(gaussian_bench(config), "mean_error")
        for setting in wins:
            gfl, l2, mle = (errors[(m, setting)] for m in ("gfl", "l2", "mle"))
            wins[setting] += gfl < l2 and gfl < mle
            l2_wins[setting] += l2 < mle

    for setting in wins:
        assert wins[setting] >= 3, setting
        assert l2_wins[setting] >= 3, setting


@pytest.mark.slow
def test_gfl_worst_case_beats_kernel_across_an_occlusion():
    # 24x24 grid of 10 m cells, one 100 mCi cesium source shielded to the northwest
    config = RunConfig(
        seed=4,
        tree=TREE,
        solver=SOLVER,
        bandwidth=5.0,
        scenario=ScenarioConfig(
            grid={"rows": 24, "cols": 24, "cell_meters": 10.0},
            background={"rate": 40.0, "spectrum": "background"},
            sources=[{"spectrum": "cesium", "mci": 100.0, "row": 12, "col": 12}],
            occlusion={"source_cell": (12, 12), "quadrant": "nw"},
            bins=TREE["bins"],
        ),
        bench={
            "kind": "radiological",
            "methods": ["gfl", "gaussian-kernel"],
            "dwell_times": [10.0, 60.0, 300.0],
        },
    )
    worst = _errors(radiological_bench(config), "worst_error")

    for setting in ("T=10", "T=60"):
        assert worst[("gfl", setting)] < worst[("gaussian-kernel", setting)]
    assert worst[("gfl", "T=300")] < worst[("gfl", "T=10")]


@pytest.mark.slow
def test_smoothed_local_reference_gives_the_best_roc():
    scenario = build_radiological_scenario(
        ScenarioConfig(
            grid={"rows": 10, "cols": 10, "cell_meters": 10.0},
            background={"rate": 40.0, "spectrum": "background"},
            sources=[{"spectrum": "cobalt", "mci": 100.0, "row": 0, "col": 0}],
            bins=TREE["bins"],
        )
    )
    records = sample_records(scenario, 200, np.random.default_rng(11))
    train, test = train_test_split(records, 0.5, np.random.default_rng(12))
    train_histograms = train.histograms()

    local, _ = fit_histograms(
        train_histograms, scenario.graph, RunConfig(tree=TREE, solver=SOLVER), seed=0
    )
    refs = References(
        local_cdf=local.cdf,
        global_cdf=global_reference(train_histograms),
        train_histograms=train_histograms,
    )
    source = resolve_spectrum("cesium", TREE["bins"])
    run = run_detection(test, refs, 40, 5.0, source, 500, seed=13)

    auc = {m: roc_curve(run.null[m], run.alternative[m]).auc for m in refs.methods()}
    assert auc["local"] > auc["global"]
    assert auc["local"] > auc["two-sample"]
