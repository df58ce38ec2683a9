from .histograms import (
    format_density,
    format_histograms,
    format_records,
    read_density,
    read_histograms,
    read_records,
)
from .ingest import ingest, ingest_file, ingest_records, restrict_channels
from .records import Records

__all__ = [
    "Records",
    "format_density",
    "format_histograms",
    "format_records",
    "ingest",
    "ingest_file",
    "ingest_records",
    "read_density",
    "read_histograms",
    "read_records",
    "restrict_channels",
]
