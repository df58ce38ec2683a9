import numpy as np
import pytest

from spatialdensity.anomaly.injection import global_reference, train_test_split
from spatialdensity.anomaly.roc import (
    References,
    empirical_null,
    fpr_at,
    roc_curve,
    run_detection,
    threshold_for_fpr,
)
from spatialdensity.config import ScenarioConfig
from spatialdensity.data_loader.records import Records
from spatialdensity.density.field import empirical_field
from spatialdensity.exceptions import EmptyInputError, InvalidConfigError
from spatialdensity.radsim.scenario import build_radiological_scenario, sample_records
from spatialdensity.radsim.spectra import Spectrum

SOURCE = Spectrum(np.array([0.0, 0.0, 0.0, 0.0, 1.0, 2.0, 4.0, 8.0]), name="hard")


class TestRocCurve:
    def test_perfect_separation(self):
        curve = roc_curve([0.1, 0.2, 0.3], [0.5, 0.6])
        assert curve.auc == pytest.approx(1.0)

    def test_identical_sets(self):
        curve = roc_curve([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
        assert curve.auc == pytest.approx(0.5)

    def test_single_points(self):
        curve = roc_curve([0.1], [0.2])
        assert curve.auc == pytest.approx(1.0)
        assert (0.0, 1.0) in set(zip(curve.fpr.tolist(), curve.tpr.tolist()))

    def test_monotone_and_anchored(self):
        rng = np.random.default_rng(0)
        curve = roc_curve(rng.uniform(size=50), rng.uniform(0.2, 1.2, size=40))
        assert curve.fpr[0] == 0.0 and curve.tpr[0] == 0.0
        assert curve.fpr[-1] == 1.0 and curve.tpr[-1] == 1.0
        assert np.all(np.diff(curve.fpr) >= 0)
        assert np.all(np.diff(curve.tpr) >= 0)
        assert 0.5 < curve.auc < 1.0

    def test_frame_columns(self):
        frame = roc_curve([0.1], [0.2]).to_frame()
        assert list(frame.columns) == ["threshold", "fpr", "tpr"]
        assert frame["threshold"].iloc[0] == np.inf

    def test_empty_sets(self):
        with pytest.raises(EmptyInputError):
            roc_curve([], [0.1])
        with pytest.raises(EmptyInputError):
            roc_curve([0.1], [])


class TestThresholds:
    def test_fpr_extremes(self):
        null = [0.0, 0.1, 0.4, 0.9]
        assert fpr_at(null, 0.0) == 1.0
        assert fpr_at(null, 1.0) == 0.0
        assert fpr_at(null, 0.4) == 0.5

    def test_threshold_for_fpr(self):
        null = [0.1, 0.2, 0.3, 0.4]
        assert threshold_for_fpr(null, 0.5) == 0.3
        assert threshold_for_fpr(null, 1.0) == 0.1
        beyond = threshold_for_fpr(null, 0.0)
        assert beyond > 0.4
        assert fpr_at(null, beyond) == 0.0


class TestDetection:
    def setup_method(self):
        self.seed = 5

    def _references(self, records):
        train, test = train_test_split(records, 0.5, np.random.default_rng(1))
        train_histograms = train.histograms()
        refs = References(
            local_cdf=empirical_field(train_histograms).cdf,
            global_cdf=global_reference(train_histograms),
            train_histograms=train_histograms,
        )
        return refs, test

    def test_strong_anomaly_is_detected(self, small_records):
        refs, test = self._references(small_records)
        run = run_detection(test, refs, 10, 50.0, SOURCE, 60, self.seed)
        for method in refs.methods():
            assert run.roc(method).auc > 0.9
            assert np.all((run.null[method] >= 0) & (run.null[method] <= 1))

    def test_stats_frame(self, small_records):
        refs, test = self._references(small_records)
        run = run_detection(test, refs, 4, 1.0, SOURCE, 5, self.seed, methods=["global"])
        frame = run.stats_frame()
        assert list(frame.columns) == [
            "T", "rate", "source", "method", "replicate", "site", "null", "alternative",
        ]
        assert len(frame) == 5
        assert set(frame["source"]) == {"hard"}

    def test_settings_share_sites(self, small_records):
        refs, test = self._references(small_records)
        low = run_detection(test, refs, 4, 0.5, SOURCE, 10, self.seed)
        high = run_detection(test, refs, 4, 20.0, SOURCE, 10, self.seed)
        np.testing.assert_array_equal(low.sites, high.sites)
        np.testing.assert_array_equal(low.null["local"], high.null["local"])

    def test_missing_reference(self, small_records):
        refs, test = self._references(small_records)
        only_global = References(global_cdf=refs.global_cdf)
        with pytest.raises(InvalidConfigError):
            run_detection(test, only_global, 4, 1.0, SOURCE, 3, self.seed, methods=["local"])


class TestEmpiricalNull:
    def test_sorted_statistics_in_unit_interval(self, small_records):
        reference = global_reference(small_records.histograms())
        null = empirical_null(small_records, reference, 5, 40, seed=2)
        assert null.shape == (40,)
        assert np.all(np.diff(null) >= 0)
        assert null[0] >= 0.0 and null[-1] <= 1.0

    def test_local_reference(self, small_records):
        reference = empirical_field(small_records.histograms()).cdf
        null = empirical_null(small_records, reference, 5, 20, seed=2)
        assert fpr_at(null, 0.0) == 1.0

    def test_deterministic(self, small_records):
        reference = global_reference(small_records.histograms())
        a = empirical_null(small_records, reference, 3, 15, seed=9)
        b = empirical_null(small_records, reference, 3, 15, seed=9)
        np.testing.assert_array_equal(a, b)

    def test_true_reference_gives_a_lower_null_than_the_global_one(self):
        config = ScenarioConfig(
            grid={"rows": 5, "cols": 5, "cell_meters": 10.0},
            background={"rate": 40.0, "spectrum": "background"},
            sources=[{"spectrum": "cesium", "mci": 100.0, "row": 2, "col": 2}],
            occlusion={"source_cell": (2, 2), "quadrant": "nw"},
            bins=16,
        )
        scenario = build_radiological_scenario(config)
        records = sample_records(scenario, 120, np.random.default_rng(5))

        exact = empirical_null(records, scenario.densities().cdf, 60, 200, seed=3)
        pooled = empirical_null(records, global_reference(records.histograms()), 60, 200, seed=3)
        for q in (0.25, 0.5, 0.75, 0.95):
            assert np.quantile(exact, q) < np.quantile(pooled, q)


class TestEmptyBootstrapDraws:
    def setup_method(self):
        rows = np.zeros((20, 8), dtype=np.int64)
        rows[10:, :4] = 1  # only site 1 ever records counts
        self.records = Records(sites=np.repeat([0, 1], 10), counts=rows, num_sites=2)
        self.refs = References(global_cdf=np.linspace(0.125, 1.0, 8))

    def test_detection_redraws_empty_observations(self, mocker):
        warning = mocker.patch("spatialdensity.anomaly.roc.logger.warning")
        run = run_detection(self.records, self.refs, 3, 0.0, SOURCE, 30, seed=4)
        assert len(run.sites) == 30
        assert set(run.sites.tolist()) == {1}
        assert np.all(np.isfinite(run.null["global"]))
        assert run.stats_frame()["replicate"].tolist() == list(range(30))
        warning.assert_called_once()

    def test_detection_skips_replicates_that_stay_empty(self, mocker):
        mocker.patch("spatialdensity.anomaly.roc.MAX_REDRAWS", 1)
        warning = mocker.patch("spatialdensity.anomaly.roc.logger.warning")
        run = run_detection(self.records, self.refs, 3, 0.0, SOURCE, 30, seed=4)
        kept = run.stats_frame()["replicate"].tolist()
        assert 0 < len(kept) < 30
        assert kept == sorted(kept)
        assert set(run.sites.tolist()) == {1}
        assert "skipped" in warning.call_args[0][0]

    def test_detection_fails_when_every_draw_is_empty(self):
        records = Records(sites=np.zeros(5), counts=np.zeros((5, 8)), num_sites=1)
        with pytest.raises(EmptyInputError, match="every bootstrap observation was empty"):
            run_detection(records, self.refs, 2, 0.0, SOURCE, 3, seed=1)

    def test_empirical_null_redraws_empty_observations(self, mocker):
        warning = mocker.patch("spatialdensity.anomaly.roc.logger.warning")
        null = empirical_null(self.records, self.refs.global_cdf, 3, 30, seed=4)
        assert null.shape == (30,)
        assert np.all(np.diff(null) >= 0)
        warning.assert_called_once()
