import numpy as np
import pytest

from spatialdensity.data_loader.histograms import (
    format_density,
    format_histograms,
    format_records,
    read_density,
    read_histograms,
    read_raw_records,
    read_records,
)
from spatialdensity.data_loader.records import Records
from spatialdensity.exceptions import InputFileError


def test_histogram_file_layout(tmp_path):
    text = format_histograms(np.array([[1, 0, 3], [2, 2, 2]]))
    assert text == "sites=2 bins=3\n1 0 3\n2 2 2\n"
    path = tmp_path / "h.txt"
    path.write_text(text)
    np.testing.assert_array_equal(read_histograms(str(path)), [[1, 0, 3], [2, 2, 2]])


def test_single_site_histogram(tmp_path):
    path = tmp_path / "h.txt"
    path.write_text("sites=1 bins=4\n3 1 2 2\n")
    assert read_histograms(str(path)).shape == (1, 4)


def test_density_round_trip(tmp_path):
    pmf = np.array([[0.375, 0.125, 0.25, 0.25], [0.1, 0.2, 0.3, 0.4]])
    path = tmp_path / "density.txt"
    path.write_text(format_density(pmf))
    np.testing.assert_allclose(read_density(str(path)), pmf, rtol=1e-12)


def test_density_format_is_stable():
    assert format_density(np.array([[1 / 3, 2 / 3]])) == "sites=1 bins=2\n0.333333333333 0.666666666667\n"


def test_records_round_trip(tmp_path, small_records):
    path = tmp_path / "records.txt"
    path.write_text(format_records(small_records))
    loaded = read_records(str(path))
    assert loaded.num_sites == small_records.num_sites
    np.testing.assert_array_equal(loaded.sites, small_records.sites)
    np.testing.assert_array_equal(loaded.counts, small_records.counts)


def test_raw_records_keep_unknown_sites(tmp_path):
    path = tmp_path / "records.txt"
    path.write_text("sites=2 bins=2 records=2\n0 1 1\n7 0 2\n")
    fields, rows = read_raw_records(str(path))
    assert fields == {"sites": 2, "bins": 2, "records": 2}
    assert rows[:, 0].tolist() == [0, 7]


def test_records_with_unknown_site_fail_to_load(tmp_path):
    path = tmp_path / "records.txt"
    path.write_text("sites=2 bins=2 records=1\n5 1 1\n")
    with pytest.raises(InputFileError):
        read_records(str(path))


@pytest.mark.parametrize(
    "content",
    [
        "",
        "sites=2 bins=2\n1 1\n",
        "sites=1 bins=3\n1 1\n",
        "sites=1\n1 1\n",
        "sites=1 bins=2\n1 x\n",
        "sites=1 bins=2\n1 -1\n",
        "sites=1 bins=2\n1 0.5\n",
        "rows:1 bins=2\n1 1\n",
    ],
)
def test_malformed_histograms(tmp_path, content):
    path = tmp_path / "h.txt"
    path.write_text(content)
    with pytest.raises(InputFileError):
        read_histograms(str(path))


def test_missing_file_names_path(tmp_path):
    missing = tmp_path / "absent.txt"
    with pytest.raises(InputFileError) as exc_info:
        read_histograms(str(missing))
    assert str(missing) in str(exc_info.value)


def test_records_count_mismatch(tmp_path):
    path = tmp_path / "records.txt"
    path.write_text("sites=1 bins=2 records=3\n0 1 1\n")
    with pytest.raises(InputFileError):
        read_raw_records(str(path))


def test_empty_record_file(tmp_path):
    path = tmp_path / "records.txt"
    path.write_text(format_records(Records(sites=np.zeros(0), counts=np.zeros((0, 3)), num_sites=2)))
    records = read_records(str(path))
    assert len(records) == 0
    assert records.num_bins == 3
