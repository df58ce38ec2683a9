from .gaussian import (
    GaussianField,
    build_gaussian_field,
    sample_gaussian_histograms,
    true_densities,
)
from .scenario import (
    PointSource,
    Scenario,
    build_radiological_scenario,
    rate_contours,
    sample_observations,
    sample_records,
    source_count_rate,
)
from .spectra import (
    Spectrum,
    discretize_gaussian,
    load_builtin_spectrum,
    load_spectrum_csv,
    resolve_spectrum,
    save_spectrum_csv,
)

__all__ = [
    "GaussianField",
    "PointSource",
    "Scenario",
    "Spectrum",
    "build_gaussian_field",
    "build_radiological_scenario",
    "discretize_gaussian",
    "load_builtin_spectrum",
    "load_spectrum_csv",
    "rate_contours",
    "resolve_spectrum",
    "sample_gaussian_histograms",
    "sample_observations",
    "sample_records",
    "save_spectrum_csv",
    "source_count_rate",
    "true_densities",
]
