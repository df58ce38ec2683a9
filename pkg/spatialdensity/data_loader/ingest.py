from typing import Optional

import numpy as np
from loguru import logger

from spatialdensity.config import ChannelRange
from spatialdensity.exceptions import InvalidDimensionError, NumericInputError, UnknownSiteError

from .histograms import read_raw_records
from .records import Records


def restrict_channels(counts, channels: Optional[ChannelRange] = None) -> np.ndarray:
    """
    Keeps channels ``lo..hi`` of every row.

    With Winsorizing on, counts above ``hi`` are added to channel ``hi``;
    otherwise they are dropped with a warning. Channels below ``lo`` are
    always dropped.
    """
    counts = np.asarray(counts)
    if counts.ndim != 2:
        raise InvalidDimensionError(f"expected a 2-D count matrix, got shape {counts.shape}")
    if channels is None:
        return counts.astype(np.int64)
    lo, hi = channels.resolve(counts.shape[1])
    kept = counts[:, lo : hi + 1].astype(np.int64)
    overflow = counts[:, hi + 1 :].sum(axis=1)
    if np.any(overflow > 0):
        if channels.winsorize:
            kept[:, -1] += overflow
        else:
            logger.warning(
                f"Dropped {int(overflow.sum())} counts above channel {hi} (Winsorizing is off)"
            )
    return kept


def ingest_records(
    sites,
    counts,
    num_sites: int,
    channels: Optional[ChannelRange] = None,
) -> Records:
    """
    Validates raw one-second rows and applies the channel rule.

    Raises:
        UnknownSiteError: some rows name a site outside ``0..num_sites-1``;
            the error lists every offending row.
        NumericInputError: negative counts.
    """
    sites = np.asarray(sites).reshape(-1)
    counts = np.asarray(counts)
    if counts.ndim != 2 or counts.shape[0] != sites.shape[0]:
        raise InvalidDimensionError(
            f"expected one count row per site id, got {counts.shape} for {sites.shape[0]} ids"
        )
    if np.any(counts < 0):
        raise NumericInputError("record counts must be non-negative")
    bad = np.flatnonzero((sites < 0) | (sites >= num_sites))
    if bad.size:
        raise UnknownSiteError(bad.tolist(), sites[bad].tolist())
    return Records(sites=sites, counts=restrict_channels(counts, channels), num_sites=num_sites)


def ingest(
    sites,
    counts,
    num_sites: int,
    channels: Optional[ChannelRange] = None,
) -> np.ndarray:
    """Per-site histogram matrix of the ingested rows, summed componentwise."""
    return ingest_records(sites, counts, num_sites, channels).histograms()


def ingest_file(
    path: str,
    num_sites: Optional[int] = None,
    channels: Optional[ChannelRange] = None,
) -> Records:
    """Reads a record file and ingests it; ``num_sites`` defaults to the header's."""
    fields, rows = read_raw_records(path)
    return ingest_records(
        rows[:, 0], rows[:, 1:], num_sites if num_sites is not None else fields["sites"], channels
    )
