from .builder import (
    AggregatedEdge,
    EdgeAccumulator,
    StripPolicy,
    YearSnapshot,
    build_snapshot,
    read_snapshot,
    write_snapshot,
)
from .dust_filter import apply_dust_filter, filter_coverage

__all__ = [
    "AggregatedEdge",
    "EdgeAccumulator",
    "StripPolicy",
    "YearSnapshot",
    "build_snapshot",
    "read_snapshot",
    "write_snapshot",
    "apply_dust_filter",
    "filter_coverage",
]
