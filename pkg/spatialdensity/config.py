import os
from typing import Any, Dict, List, Literal, Optional, Tuple

import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from spatialdensity.constants import (
    BUILTIN_SPECTRA,
    DEFAULT_ALPHA0,
    DEFAULT_ANOMALY_RATES,
    DEFAULT_BACKGROUND_RATE,
    DEFAULT_BURN_IN,
    DEFAULT_CELL_METERS,
    DEFAULT_DWELL_TIMES,
    DEFAULT_LAMBDA_GRID_SIZE,
    DEFAULT_LAMBDA_RATIO,
    DEFAULT_MAX_ITERS,
    DEFAULT_NUM_BINS,
    DEFAULT_SWEEPS,
    DEFAULT_TOL_ABS,
    DEFAULT_TOL_REL,
    DEFAULT_TRAIN_FRACTION,
    DEFAULT_TREE_DEPTH,
    GAUSSIAN_FAMILIES,
    OCCLUSION_QUADRANTS,
    SELECTION_CRITERIA,
    SMOOTHER_CHOICES,
)
from spatialdensity.exceptions import InputFileError, InvalidConfigError


class SolverOptions(BaseModel):
    """Options of the binomial graph-fused-lasso solver and its lambda path."""

    model_config = ConfigDict(populate_by_name=True, frozen=True)

    lam: Optional[float] = Field(
        None, alias="lambda", ge=0, description="Fixed penalty; None selects by criterion"
    )
    lambda_grid_size: int = Field(DEFAULT_LAMBDA_GRID_SIZE, ge=1)
    lambda_ratio: float = Field(DEFAULT_LAMBDA_RATIO, gt=0, lt=1)
    criterion: str = Field("bic", description="Model selection criterion")
    tol_abs: float = Field(DEFAULT_TOL_ABS, gt=0)
    tol_rel: float = Field(DEFAULT_TOL_REL, ge=0)
    tol_primal: Optional[float] = Field(
        None, gt=0, description="Overrides the primal stopping threshold"
    )
    tol_dual: Optional[float] = Field(
        None, gt=0, description="Overrides the dual stopping threshold"
    )
    max_iters: int = Field(DEFAULT_MAX_ITERS, ge=1)
    alpha0: float = Field(DEFAULT_ALPHA0, gt=0)
    seed: int = Field(0, ge=0)

    @field_validator("criterion")
    @classmethod
    def is_criterion_supported(cls, criterion: str) -> str:
        if criterion not in SELECTION_CRITERIA:
            raise ValueError(
                f"Unsupported criterion: {criterion}. Supported criteria are: {SELECTION_CRITERIA}"
            )
        return criterion


class TreeOptions(BaseModel):
    bins: int = Field(DEFAULT_NUM_BINS, ge=1)
    depth: int = Field(DEFAULT_TREE_DEPTH, ge=1)

    @model_validator(mode="after")
    def is_depth_compatible(self) -> "TreeOptions":
        if self.bins % (2**self.depth) != 0:
            raise ValueError(
                f"bins={self.bins} is not divisible by 2^depth={2**self.depth}"
            )
        return self


class ChannelRange(BaseModel):
    """Retained channel range [lo, hi] (inclusive) and the Winsorize rule."""

    lo: int = Field(0, ge=0)
    hi: Optional[int] = Field(None, ge=0, description="None keeps all channels")
    winsorize: bool = True

    @model_validator(mode="after")
    def is_range_ordered(self) -> "ChannelRange":
        if self.hi is not None and self.hi < self.lo:
            raise ValueError(f"Channel range hi={self.hi} is below lo={self.lo}")
        return self

    def resolve(self, bins: int) -> Tuple[int, int]:
        hi = bins - 1 if self.hi is None else self.hi
        if hi >= bins or self.lo >= bins:
            raise InvalidConfigError(
                f"Channel range [{self.lo}, {hi}] exceeds [0, {bins})"
            )
        return self.lo, hi


class GridConfig(BaseModel):
    rows: int = Field(..., ge=1)
    cols: int = Field(..., ge=1)
    cell_meters: float = Field(DEFAULT_CELL_METERS, gt=0)


class BackgroundConfig(BaseModel):
    rate: float = Field(DEFAULT_BACKGROUND_RATE, ge=0, description="counts/second")
    spectrum: str = Field("background", description="Built-in name or CSV path")


class SourceConfig(BaseModel):
    spectrum: str = Field(..., description="Built-in name or CSV path")
    mci: float = Field(..., ge=0)
    row: int = Field(..., ge=0)
    col: int = Field(..., ge=0)


class OcclusionConfig(BaseModel):
    source_cell: Tuple[int, int]
    quadrant: str = "nw"

    @field_validator("quadrant")
    @classmethod
    def is_quadrant_supported(cls, quadrant: str) -> str:
        if quadrant not in OCCLUSION_QUADRANTS:
            raise ValueError(
                f"Unsupported occlusion quadrant: {quadrant}. Supported: {OCCLUSION_QUADRANTS}"
            )
        return quadrant


class ScenarioConfig(BaseModel):
    grid: GridConfig
    background: BackgroundConfig = BackgroundConfig()
    sources: List[SourceConfig] = Field(default_factory=list)
    occlusion: Optional[OcclusionConfig] = None
    bins: int = Field(DEFAULT_NUM_BINS, ge=1)
    dwell: float = Field(60.0, gt=0, description="Seconds of observation per site")
    record_seconds: int = Field(
        0, ge=0, description="One-second records written per site; 0 skips the record file"
    )
    seed: int = Field(0, ge=0)

    @model_validator(mode="after")
    def are_sources_inside_grid(self) -> "ScenarioConfig":
        for source in self.sources:
            if source.row >= self.grid.rows or source.col >= self.grid.cols:
                raise ValueError(
                    f"Source cell ({source.row}, {source.col}) is outside the "
                    f"{self.grid.rows}x{self.grid.cols} grid"
                )
        return self


class GaussianBenchConfig(BaseModel):
    family: str = "piecewise-constant"
    rows: int = Field(25, ge=2)
    cols: int = Field(25, ge=2)
    samples_per_cell: List[int] = Field(default_factory=lambda: [100, 1000])

    @field_validator("family")
    @classmethod
    def is_family_supported(cls, family: str) -> str:
        if family not in GAUSSIAN_FAMILIES:
            raise ValueError(f"Unsupported family: {family}. Supported: {GAUSSIAN_FAMILIES}")
        return family


class DetectionConfig(BaseModel):
    dwell_times: List[int] = Field(default_factory=lambda: list(DEFAULT_DWELL_TIMES))
    rates: List[float] = Field(default_factory=lambda: list(DEFAULT_ANOMALY_RATES))
    sources: List[str] = Field(default_factory=lambda: ["cesium", "cobalt"])
    replicates: int = Field(1000, ge=1)
    train_fraction: float = Field(DEFAULT_TRAIN_FRACTION, gt=0, lt=1)
    channels: ChannelRange = ChannelRange()
    methods: List[str] = Field(default_factory=lambda: ["local", "global", "two-sample"])

    @field_validator("dwell_times")
    @classmethod
    def are_dwell_times_positive(cls, values: List[int]) -> List[int]:
        if not values or any(v < 1 for v in values):
            raise ValueError("dwell_times must be a non-empty list of integers >= 1")
        return values

    @field_validator("methods")
    @classmethod
    def are_methods_supported(cls, values: List[str]) -> List[str]:
        unknown = set(values) - {"local", "global", "two-sample"}
        if unknown:
            raise ValueError(f"Unsupported detection methods: {sorted(unknown)}")
        return values


class BayesConfig(BaseModel):
    order: int = Field(0, ge=0, le=2, description="Trend filtering order K")
    sweeps: int = Field(DEFAULT_SWEEPS, ge=1)
    burn_in: int = Field(DEFAULT_BURN_IN, ge=0)
    lambda_grid: List[float] = Field(default_factory=lambda: [0.01, 0.1, 1.0, 10.0])
    node: str = Field("", description="Tree node as a binary string; '' is the root")

    @field_validator("lambda_grid")
    @classmethod
    def is_grid_positive(cls, values: List[float]) -> List[float]:
        if not values or any(v <= 0 for v in values):
            raise ValueError("lambda_grid must be a non-empty list of positive values")
        return values

    @field_validator("node")
    @classmethod
    def is_node_binary(cls, node: str) -> str:
        if any(ch not in "01" for ch in node):
            raise ValueError(f"node must be a binary string, got '{node}'")
        return node


class BenchConfig(BaseModel):
    """Reconstruction benchmark: Gaussian fields or the radiological scenario."""

    kind: Literal["gaussian", "radiological"] = "gaussian"
    methods: List[str] = Field(default_factory=lambda: ["gfl", "l2", "mle"])
    dwell_times: List[float] = Field(default_factory=lambda: [10.0, 60.0, 300.0])
    replicates: int = Field(1, ge=1)

    @field_validator("methods")
    @classmethod
    def are_methods_supported(cls, values: List[str]) -> List[str]:
        unknown = set(values) - set(SMOOTHER_CHOICES)
        if not values or unknown:
            raise ValueError(f"Unsupported benchmark methods: {sorted(unknown)}")
        return values

    @field_validator("dwell_times")
    @classmethod
    def are_dwell_times_positive(cls, values: List[float]) -> List[float]:
        if not values or any(v <= 0 for v in values):
            raise ValueError("dwell_times must be a non-empty list of positive values")
        return values


class InputPaths(BaseModel):
    histograms: Optional[str] = None
    records: Optional[str] = None
    graph: Optional[str] = None
    density: Optional[str] = None
    injected: Optional[str] = None
    stats: Optional[str] = None
    train: Optional[str] = None
    spectra_dir: Optional[str] = None


class RunConfig(BaseModel):
    """Top-level configuration of one CLI run."""

    model_config = ConfigDict(populate_by_name=True)

    subcommand: Optional[str] = None
    inputs: InputPaths = InputPaths()
    grid: Optional[GridConfig] = None
    tree: TreeOptions = TreeOptions()
    smoother: str = "gfl"
    solver: SolverOptions = SolverOptions()
    bandwidth: float = Field(5.0, gt=0, description="Gaussian-kernel bandwidth c in cells")
    channels: ChannelRange = ChannelRange()
    scenario: Optional[ScenarioConfig] = None
    gaussian: GaussianBenchConfig = GaussianBenchConfig()
    detection: DetectionConfig = DetectionConfig()
    bayes: BayesConfig = BayesConfig()
    bench: BenchConfig = BenchConfig()
    seed: int = Field(0, ge=0)
    workers: int = Field(1, ge=1)
    out: str = "out"
    verbose: bool = False
    save_logs: bool = False

    @field_validator("smoother")
    @classmethod
    def is_smoother_supported(cls, smoother: str) -> str:
        if smoother not in SMOOTHER_CHOICES:
            raise ValueError(
                f"Unsupported smoother: {smoother}. Supported smoothers are: {SMOOTHER_CHOICES}"
            )
        return smoother

    @classmethod
    def from_dict(cls, config: Dict[str, Any]) -> "RunConfig":
        return cls(**config)

    @classmethod
    def from_yaml(cls, path: str) -> "RunConfig":
        if not os.path.isfile(path):
            raise InputFileError(path, "config file not found")
        with open(path, "r", encoding="utf-8") as f:
            raw = yaml.safe_load(f) or {}
        if not isinstance(raw, dict):
            raise InvalidConfigError(f"Config file {path} must contain a mapping")
        return cls.from_dict(raw)

    def to_yaml(self) -> str:
        return yaml.dump(self.model_dump(by_alias=True), sort_keys=False)

    def check_inputs(self, *names: str) -> None:
        """Ensures the named input paths are configured and exist."""
        for name in names:
            path = getattr(self.inputs, name)
            if path is None:
                raise InvalidConfigError(f"inputs.{name} is required for this subcommand")
            if not os.path.exists(path):
                raise InputFileError(path, f"{name} file not found")


def builtin_or_path(spectrum: str) -> Literal["builtin", "path"]:
    return "builtin" if spectrum in BUILTIN_SPECTRA else "path"


class ConfigManager:
    """A singleton class to manage the active run configuration."""

    _config: RunConfig = RunConfig()

    @classmethod
    def set(cls, config_dict: Dict[str, Any]) -> None:
        """Set the active configuration."""
        cls._config = RunConfig.from_dict(config_dict)

    @classmethod
    def get(cls) -> RunConfig:
        """Get the active configuration."""
        if cls._config is None:
            cls._config = RunConfig()
        return cls._config

    @classmethod
    def update(cls, config_dict: Dict[str, Any]) -> None:
        """Update the existing configuration with new values."""
        current_config = cls.get().model_dump(by_alias=True)
        for key, value in config_dict.items():
            if value is None:
                continue
            if isinstance(value, dict) and isinstance(current_config.get(key), dict):
                current_config[key] = {
                    **current_config[key],
                    **{k: v for k, v in value.items() if v is not None},
                }
            else:
                current_config[key] = value
        cls._config = RunConfig.from_dict(current_config)
