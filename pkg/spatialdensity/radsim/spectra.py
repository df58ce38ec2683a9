import os
from dataclasses import dataclass
from importlib import resources
from typing import Optional, Tuple

import numpy as np
import pandas as pd
from loguru import logger
from scipy.stats import norm

from spatialdensity.constants import BUILTIN_SPECTRA, DEFAULT_NUM_BINS, GAUSSIAN_SUPPORT
from spatialdensity.exceptions import (
    InputFileError,
    InvalidDimensionError,
    NumericInputError,
)

NORMALIZATION_TOL = 1e-6


@dataclass(frozen=True)
class Spectrum:
    """A probability vector over energy bins."""

    probabilities: np.ndarray
    name: str = ""

    def __post_init__(self):
        probs = np.asarray(self.probabilities, dtype=float)
        if probs.ndim != 1 or probs.size == 0:
            raise InvalidDimensionError("a spectrum must be a non-empty 1-D vector")
        if not np.all(np.isfinite(probs)) or np.any(probs < 0):
            raise NumericInputError(f"spectrum '{self.name}' has negative or non-finite mass")
        total = probs.sum()
        if total <= 0:
            raise NumericInputError(f"spectrum '{self.name}' has no mass")
        probs = probs / total
        probs.setflags(write=False)
        object.__setattr__(self, "probabilities", probs)

    @property
    def num_bins(self) -> int:
        return int(self.probabilities.shape[0])

    @property
    def cdf(self) -> np.ndarray:
        cdf = np.cumsum(self.probabilities)
        cdf[-1] = 1.0
        return cdf

    def rebin(self, bins: int) -> "Spectrum":
        """Sums groups of adjacent channels down to ``bins`` channels."""
        if bins < 1 or self.num_bins % bins != 0:
            raise InvalidDimensionError(
                f"cannot rebin {self.num_bins} channels into {bins}"
            )
        grouped = self.probabilities.reshape(bins, -1).sum(axis=1)
        return Spectrum(grouped, name=self.name)


def load_spectrum_csv(path: str, name: Optional[str] = None) -> Spectrum:
    """
    Reads a ``bin,probability`` CSV (0-indexed bins). A spectrum whose mass
    is off by more than 1e-6 is renormalised with a warning.
    """
    if not os.path.isfile(path):
        raise InputFileError(path, "spectrum file not found")
    try:
        frame = pd.read_csv(path)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise InputFileError(path, f"malformed spectrum file ({e})") from e
    if list(frame.columns) != ["bin", "probability"]:
        raise InputFileError(path, "spectrum file must have columns 'bin,probability'")

    frame = frame.sort_values("bin")
    if not np.array_equal(frame["bin"].to_numpy(), np.arange(len(frame))):
        raise InputFileError(path, "spectrum bins must be 0..n-1 without gaps")
    probs = frame["probability"].to_numpy(dtype=float)
    total = probs.sum()
    if abs(total - 1.0) > NORMALIZATION_TOL:
        logger.warning(f"Spectrum {path} sums to {total:.8g}; renormalising")
    return Spectrum(probs, name=name or os.path.splitext(os.path.basename(path))[0])


def save_spectrum_csv(spectrum: Spectrum, path: str) -> None:
    frame = pd.DataFrame(
        {"bin": np.arange(spectrum.num_bins), "probability": spectrum.probabilities}
    )
    frame.to_csv(path, index=False, float_format="%.12g", lineterminator="\n")


def load_builtin_spectrum(name: str, bins: int = DEFAULT_NUM_BINS) -> Spectrum:
    """Loads a shipped synthetic spectrum and rebins it to ``bins`` channels."""
    if name not in BUILTIN_SPECTRA:
        raise InputFileError(name, f"unknown built-in spectrum (choose from {BUILTIN_SPECTRA})")
    with resources.as_file(
        resources.files("spatialdensity.radsim") / "data" / f"{name}.csv"
    ) as path:
        spectrum = load_spectrum_csv(str(path), name=name)
    return spectrum if spectrum.num_bins == bins else spectrum.rebin(bins)


def resolve_spectrum(
    name: str, bins: int = DEFAULT_NUM_BINS, spectra_dir: Optional[str] = None
) -> Spectrum:
    """A built-in name, a CSV path, or a name found as ``<spectra_dir>/<name>.csv``."""
    if spectra_dir is not None:
        candidate = os.path.join(spectra_dir, f"{name}.csv")
        if os.path.isfile(candidate):
            spectrum = load_spectrum_csv(candidate, name=name)
            return spectrum if spectrum.num_bins == bins else spectrum.rebin(bins)
    if name in BUILTIN_SPECTRA:
        return load_builtin_spectrum(name, bins)
    spectrum = load_spectrum_csv(name)
    return spectrum if spectrum.num_bins == bins else spectrum.rebin(bins)


def discretize_gaussian(
    mean: float,
    bins: int = DEFAULT_NUM_BINS,
    support: Tuple[float, float] = GAUSSIAN_SUPPORT,
) -> Spectrum:
    """Unit-variance normal mass per bin on ``support``, renormalised to the support."""
    edges = np.linspace(support[0], support[1], bins + 1)
    return Spectrum(np.diff(norm.cdf(edges, loc=mean)), name=f"N({mean:.4g}, 1)")
