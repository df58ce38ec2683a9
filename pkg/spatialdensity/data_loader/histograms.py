"""
Plain-text matrix files.

A histogram or density file starts with ``sites=<p> bins=<n>`` and holds one
whitespace-separated row per site. Record files start with
``sites=<p> bins=<n> records=<r>`` and hold one ``site c0 ... c{n-1}`` row
per one-second record.
"""

import io
import os
import re
from typing import Dict, List, Tuple

import numpy as np

from spatialdensity.exceptions import InputFileError

from .records import Records

DENSITY_FORMAT = "%.12g"

_HEADER_FIELD = re.compile(r"^(\w+)=(\d+)$")


def _parse_header(path: str, line: str, keys: List[str]) -> Dict[str, int]:
    fields = {}
    for token in line.split():
        match = _HEADER_FIELD.match(token)
        if match is None:
            raise InputFileError(path, f"malformed header token '{token}'")
        fields[match.group(1)] = int(match.group(2))
    missing = [k for k in keys if k not in fields]
    if missing:
        raise InputFileError(path, f"header lacks {', '.join(missing)}")
    return fields


def _read_body(path: str) -> Tuple[str, np.ndarray]:
    if not os.path.isfile(path):
        raise InputFileError(path)
    with open(path, "r", encoding="utf-8") as f:
        header = f.readline()
        body = f.read()
    if not header.strip():
        raise InputFileError(path, "empty file")
    try:
        values = np.loadtxt(io.StringIO(body), dtype=float, ndmin=2)
    except ValueError as e:
        raise InputFileError(path, f"malformed matrix ({e})") from e
    return header, values


def _check_shape(path: str, values: np.ndarray, rows: int, cols: int) -> np.ndarray:
    if rows == 0:
        return np.zeros((0, cols))
    if values.shape != (rows, cols):
        raise InputFileError(
            path, f"expected a {rows}x{cols} matrix, found {values.shape[0]}x{values.shape[1]}"
        )
    return values


def _as_counts(path: str, values: np.ndarray) -> np.ndarray:
    if np.any(values < 0) or np.any(values != np.round(values)):
        raise InputFileError(path, "counts must be non-negative integers")
    return values.astype(np.int64)


def format_histograms(histograms) -> str:
    histograms = np.asarray(histograms, dtype=np.int64)
    buffer = io.StringIO()
    buffer.write(f"sites={histograms.shape[0]} bins={histograms.shape[1]}\n")
    np.savetxt(buffer, histograms, fmt="%d")
    return buffer.getvalue()


def read_histograms(path: str) -> np.ndarray:
    """
    Reads a per-site histogram matrix.

    Raises:
        InputFileError: the file is missing, its header is malformed, or the
            matrix does not match the header.
    """
    header, values = _read_body(path)
    fields = _parse_header(path, header, ["sites", "bins"])
    values = _check_shape(path, values, fields["sites"], fields["bins"])
    return _as_counts(path, values)


def format_density(pmf) -> str:
    pmf = np.asarray(pmf, dtype=float)
    buffer = io.StringIO()
    buffer.write(f"sites={pmf.shape[0]} bins={pmf.shape[1]}\n")
    np.savetxt(buffer, pmf, fmt=DENSITY_FORMAT)
    return buffer.getvalue()


def read_density(path: str) -> np.ndarray:
    header, values = _read_body(path)
    fields = _parse_header(path, header, ["sites", "bins"])
    values = _check_shape(path, values, fields["sites"], fields["bins"])
    if np.any(values < 0):
        raise InputFileError(path, "densities must be non-negative")
    return values


def format_records(records: Records) -> str:
    buffer = io.StringIO()
    buffer.write(f"sites={records.num_sites} bins={records.num_bins} records={len(records)}\n")
    np.savetxt(buffer, np.column_stack([records.sites, records.counts]), fmt="%d")
    return buffer.getvalue()


def read_raw_records(path: str) -> Tuple[Dict[str, int], np.ndarray]:
    """Header fields and the raw ``site c0 ... c{n-1}`` rows, before ingestion."""
    header, values = _read_body(path)
    fields = _parse_header(path, header, ["sites", "records"])
    if fields["records"] == 0:
        return fields, np.zeros((0, 1 + fields.get("bins", 0)), dtype=np.int64)
    if values.shape[0] != fields["records"]:
        raise InputFileError(
            path, f"header announces {fields['records']} records, found {values.shape[0]}"
        )
    if "bins" in fields and values.shape[1] != fields["bins"] + 1:
        raise InputFileError(
            path, f"rows must hold a site id and {fields['bins']} counts"
        )
    return fields, _as_counts(path, values)


def read_records(path: str) -> Records:
    fields, rows = read_raw_records(path)
    try:
        return Records(sites=rows[:, 0], counts=rows[:, 1:], num_sites=fields["sites"])
    except ValueError as e:
        raise InputFileError(path, str(e)) from e
