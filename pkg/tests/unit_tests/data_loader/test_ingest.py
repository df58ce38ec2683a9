import sys

import numpy as np
import pytest

from spatialdensity.config import ChannelRange
from spatialdensity.data_loader.histograms import format_records
from spatialdensity.data_loader.ingest import ingest, ingest_file, ingest_records, restrict_channels
from spatialdensity.data_loader.records import Records
from spatialdensity.exceptions import InvalidConfigError, NumericInputError, UnknownSiteError


def test_winsorize_folds_overflow_into_last_channel():
    counts = np.array([[2, 0, 1, 0, 0, 1]])
    kept = restrict_channels(counts, ChannelRange(lo=0, hi=3, winsorize=True))
    np.testing.assert_array_equal(kept, [[2, 0, 1, 1]])


def test_overflow_dropped_with_warning(mocker):
    # patch via the module object: the package re-exports the ``ingest`` function,
    # which shadows the submodule for dotted-path lookup on Python 3.10
    warning = mocker.patch.object(sys.modules["spatialdensity.data_loader.ingest"].logger, "warning")
    counts = np.array([[2, 0, 1, 0, 0, 1]])
    kept = restrict_channels(counts, ChannelRange(lo=0, hi=3, winsorize=False))
    np.testing.assert_array_equal(kept, [[2, 0, 1, 0]])
    warning.assert_called_once()


def test_channels_below_lo_are_dropped():
    kept = restrict_channels(np.array([[5, 1, 2, 3]]), ChannelRange(lo=1, hi=3))
    np.testing.assert_array_equal(kept, [[1, 2, 3]])


def test_no_range_keeps_everything():
    counts = np.array([[1, 2], [3, 4]])
    np.testing.assert_array_equal(restrict_channels(counts, None), counts)


def test_range_beyond_bins():
    with pytest.raises(InvalidConfigError):
        restrict_channels(np.ones((1, 4)), ChannelRange(lo=0, hi=9))


def test_rows_of_one_site_are_summed():
    histograms = ingest([1, 1, 0], np.array([[1, 2], [3, 4], [0, 1]]), num_sites=3)
    np.testing.assert_array_equal(histograms, [[0, 1], [4, 6], [0, 0]])


def test_unknown_sites_are_listed():
    with pytest.raises(UnknownSiteError) as exc_info:
        ingest_records([0, 4, 1, -1], np.ones((4, 2)), num_sites=3)
    assert exc_info.value.rows == [1, 3]
    assert exc_info.value.sites == [4, -1]


def test_negative_counts():
    with pytest.raises(NumericInputError):
        ingest_records([0], np.array([[1, -2]]), num_sites=1)


def test_ingest_file_uses_header_site_count(tmp_path):
    records = Records(sites=np.array([0, 2]), counts=np.array([[1, 0, 0, 9], [0, 1, 0, 0]]), num_sites=3)
    path = tmp_path / "records.txt"
    path.write_text(format_records(records))
    ingested = ingest_file(str(path), channels=ChannelRange(lo=0, hi=1))
    assert ingested.num_sites == 3
    np.testing.assert_array_equal(ingested.counts, [[1, 9], [0, 1]])
