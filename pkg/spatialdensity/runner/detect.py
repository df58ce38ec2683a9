import os
from typing import Tuple

import numpy as np
import pandas as pd
from loguru import logger

from spatialdensity.anomaly.injection import global_reference, inject_anomaly, train_test_split
from spatialdensity.anomaly.roc import References, roc_curve, run_detection
from spatialdensity.config import RunConfig
from spatialdensity.constants import (
    DENSITY_FILE,
    DIAGNOSTICS_FILE,
    INJECTED_FILE,
    ROC_FILE,
    STATS_FILE,
    SUMMARY_FILE,
)
from spatialdensity.data_loader.histograms import format_density, format_histograms, read_density
from spatialdensity.density.field import DensityField
from spatialdensity.exceptions import InputFileError, InvalidDimensionError
from spatialdensity.helpers.filemanager import FileManager
from spatialdensity.helpers.rng import child_seed, substream
from spatialdensity.radsim.spectra import resolve_spectrum

from .fit import diagnostics_document, fit_histograms
from .inputs import load_graph, load_records

SETTING_COLUMNS = ["T", "rate", "source", "method"]
STATS_COLUMNS = SETTING_COLUMNS + ["replicate", "site", "null", "alternative"]


def run_inject(config: RunConfig, file_manager: FileManager) -> np.ndarray:
    """
    One bootstrap + anomaly observation per site, for the first dwell time,
    rate and source of the detection section. Sites without rows are left
    empty.
    """
    records = load_records(config)
    detection = config.detection
    seconds, rate = detection.dwell_times[0], detection.rates[0]
    source = resolve_spectrum(detection.sources[0], records.num_bins, config.inputs.spectra_dir)

    injected = np.zeros((records.num_sites, records.num_bins), dtype=np.int64)
    skipped = []
    for s in range(records.num_sites):
        rows = records.for_site(s)
        if rows.shape[0] == 0:
            skipped.append(s)
            continue
        injected[s] = inject_anomaly(rows, seconds, rate, source, substream(config.seed, "inject", s))
    if skipped:
        logger.warning(f"No records at {len(skipped)} sites; their rows are left empty")

    file_manager.write(INJECTED_FILE, format_histograms(injected))
    logger.info(f"Injected {source.name} at {rate} counts/s over {seconds} s")
    return injected


def _local_reference(config: RunConfig, train_histograms: np.ndarray, file_manager: FileManager):
    if config.inputs.density is not None:
        config.check_inputs("density")
        pmf = read_density(config.inputs.density)
        if pmf.shape != train_histograms.shape:
            raise InvalidDimensionError(
                f"reference density has shape {pmf.shape}, records give {train_histograms.shape}"
            )
        return DensityField(pmf=pmf).cdf

    graph = load_graph(config, train_histograms.shape[0])
    field, smoothed = fit_histograms(
        train_histograms, graph, config, seed=_fit_seed(config)
    )
    file_manager.write(DENSITY_FILE, format_density(field.pmf))
    file_manager.write(DIAGNOSTICS_FILE, diagnostics_document(config, smoothed))
    return field.cdf


def _fit_seed(config: RunConfig) -> int:
    return child_seed(substream(config.seed, "reference"))


def roc_tables(stats: pd.DataFrame) -> Tuple[pd.DataFrame, pd.DataFrame]:
    """ROC points and AUC per (T, rate, source, method) from a stats table."""
    roc_frames, summary_rows = [], []
    for key, group in stats.groupby(SETTING_COLUMNS, sort=True):
        curve = roc_curve(group["null"].to_numpy(), group["alternative"].to_numpy())
        frame = curve.to_frame()
        for position, (column, value) in enumerate(zip(SETTING_COLUMNS, key)):
            frame.insert(position, column, value)
        roc_frames.append(frame)
        summary_rows.append(dict(zip(SETTING_COLUMNS, key), auc=curve.auc))
    return pd.concat(roc_frames, ignore_index=True), pd.DataFrame(summary_rows)


def run_detect(config: RunConfig, file_manager: FileManager) -> pd.DataFrame:
    """
    The detection protocol over every (T, rate, source) of the detection
    section; writes ``stats.csv``, ``roc.csv`` and ``summary.csv``.
    """
    detection = config.detection
    records = load_records(config)
    train, test = train_test_split(
        records, detection.train_fraction, substream(config.seed, "split")
    )
    train_histograms = train.histograms()
    channels = detection.channels.resolve(records.num_bins)
    logger.info(f"Split {len(records)} records into {len(train)} train / {len(test)} test")

    refs = References(
        local_cdf=_local_reference(config, train_histograms, file_manager)
        if "local" in detection.methods
        else None,
        global_cdf=global_reference(train_histograms) if "global" in detection.methods else None,
        train_histograms=train_histograms if "two-sample" in detection.methods else None,
    )

    frames = []
    for source_name in detection.sources:
        source = resolve_spectrum(source_name, records.num_bins, config.inputs.spectra_dir)
        for seconds in detection.dwell_times:
            for rate in detection.rates:
                run = run_detection(
                    test,
                    refs,
                    seconds,
                    rate,
                    source,
                    detection.replicates,
                    config.seed,
                    methods=list(detection.methods),
                    channels=channels,
                )
                frames.append(run.stats_frame())

    stats = pd.concat(frames, ignore_index=True)[STATS_COLUMNS]
    roc, summary = roc_tables(stats)
    file_manager.write_frame(STATS_FILE, stats)
    file_manager.write_frame(ROC_FILE, roc)
    file_manager.write_frame(SUMMARY_FILE, summary)
    logger.info(f"Wrote {len(summary)} ROC settings to {file_manager.abs_path(SUMMARY_FILE)}")
    return summary


def run_roc(config: RunConfig, file_manager: FileManager) -> pd.DataFrame:
    """Recomputes ``roc.csv`` and ``summary.csv`` from a stats table."""
    config.check_inputs("stats")
    path = config.inputs.stats
    try:
        stats = pd.read_csv(path)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise InputFileError(path, f"malformed stats file ({e})") from e
    missing = [c for c in SETTING_COLUMNS + ["null", "alternative"] if c not in stats.columns]
    if missing:
        raise InputFileError(path, f"stats file lacks columns {missing}")

    roc, summary = roc_tables(stats)
    file_manager.write_frame(ROC_FILE, roc)
    file_manager.write_frame(SUMMARY_FILE, summary)
    logger.info(f"Wrote ROC curves for {len(summary)} settings from {os.path.basename(path)}")
    return summary
