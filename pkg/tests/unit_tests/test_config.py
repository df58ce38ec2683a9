import pytest
import yaml
from pydantic import ValidationError

from spatialdensity.config import (
    BenchConfig,
    ChannelRange,
    ConfigManager,
    DetectionConfig,
    RunConfig,
    SolverOptions,
    TreeOptions,
    builtin_or_path,
)
from spatialdensity.exceptions import InputFileError, InvalidConfigError


class TestConfigManager:
    def setup_method(self):
        ConfigManager._config = None

    def test_get_creates_default(self):
        config = ConfigManager.get()
        assert isinstance(config, RunConfig)
        assert config.smoother == "gfl"
        assert config.tree.depth == 11

    def test_update_config(self):
        ConfigManager.set({"save_logs": True, "verbose": False})
        ConfigManager.update({"verbose": True})

        updated = ConfigManager.get()
        assert updated.save_logs is True
        assert updated.verbose is True

    def test_update_skips_none(self):
        ConfigManager.set({"seed": 7, "out": "results"})
        ConfigManager.update({"seed": None, "out": None, "workers": 3})

        config = ConfigManager.get()
        assert config.seed == 7
        assert config.out == "results"
        assert config.workers == 3

    def test_update_merges_nested_sections(self):
        ConfigManager.set({"tree": {"bins": 64, "depth": 4}, "solver": {"criterion": "aic"}})
        ConfigManager.update({"tree": {"depth": 3, "bins": None}, "solver": {"lambda": 0.5}})

        config = ConfigManager.get()
        assert config.tree.bins == 64
        assert config.tree.depth == 3
        assert config.solver.criterion == "aic"
        assert config.solver.lam == 0.5

    def test_update_validates(self):
        ConfigManager.set({})
        with pytest.raises(ValidationError):
            ConfigManager.update({"smoother": "wavelet"})


class TestRunConfig:
    def test_from_yaml(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text(
            yaml.dump(
                {
                    "smoother": "l2",
                    "seed": 11,
                    "grid": {"rows": 3, "cols": 4},
                    "solver": {"lambda": 2.0},
                }
            )
        )
        config = RunConfig.from_yaml(str(path))
        assert config.smoother == "l2"
        assert config.grid.cols == 4
        assert config.solver.lam == 2.0

    def test_yaml_round_trip(self, tmp_path):
        config = RunConfig(seed=3, solver=SolverOptions(lam=0.25))
        path = tmp_path / "run.yaml"
        path.write_text(config.to_yaml())
        assert RunConfig.from_yaml(str(path)) == config

    def test_missing_yaml(self, tmp_path):
        with pytest.raises(InputFileError):
            RunConfig.from_yaml(str(tmp_path / "absent.yaml"))

    def test_yaml_must_be_mapping(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("- 1\n- 2\n")
        with pytest.raises(InvalidConfigError):
            RunConfig.from_yaml(str(path))

    def test_empty_yaml_gives_defaults(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("")
        assert RunConfig.from_yaml(str(path)) == RunConfig()

    def test_check_inputs(self, tmp_path):
        config = RunConfig(inputs={"histograms": str(tmp_path / "absent.txt")})
        with pytest.raises(InputFileError):
            config.check_inputs("histograms")
        with pytest.raises(InvalidConfigError):
            config.check_inputs("records")

    @pytest.mark.parametrize(
        "field,value",
        [
            ("smoother", "wavelet"),
            ("workers", 0),
            ("seed", -1),
            ("bandwidth", 0.0),
        ],
    )
    def test_invalid_values(self, field, value):
        with pytest.raises(ValidationError):
            RunConfig(**{field: value})


class TestSections:
    def test_tree_depth_must_divide_bins(self):
        with pytest.raises(ValidationError):
            TreeOptions(bins=6, depth=2)

    def test_criterion(self):
        with pytest.raises(ValidationError):
            SolverOptions(criterion="cv")

    def test_channel_range(self):
        assert ChannelRange(lo=2).resolve(8) == (2, 7)
        with pytest.raises(ValidationError):
            ChannelRange(lo=5, hi=3)
        with pytest.raises(InvalidConfigError):
            ChannelRange(lo=0, hi=8).resolve(8)

    def test_detection_methods(self):
        with pytest.raises(ValidationError):
            DetectionConfig(methods=["local", "bayes"])
        with pytest.raises(ValidationError):
            DetectionConfig(dwell_times=[0])

    def test_bench_methods(self):
        assert BenchConfig(methods=["mle"]).methods == ["mle"]
        with pytest.raises(ValidationError):
            BenchConfig(methods=["wavelet"])
        with pytest.raises(ValidationError):
            BenchConfig(kind="field")

    def test_bayes_node_is_binary(self):
        with pytest.raises(ValidationError):
            RunConfig(bayes={"node": "012"})

    def test_builtin_or_path(self):
        assert builtin_or_path("cesium") == "builtin"
        assert builtin_or_path("spectra/am241.csv") == "path"
