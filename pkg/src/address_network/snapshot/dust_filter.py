from fractions import Fraction
from typing import Tuple

from .. import DEFAULT_DUST_THRESHOLD
from ..utils.errors import SnapshotContractError, UndefinedMetricError
from .builder import YearSnapshot


def apply_dust_filter(snapshot: YearSnapshot, threshold: int = DEFAULT_DUST_THRESHOLD) -> YearSnapshot:
    """Keep only edges moving strictly more than `threshold` quanta in the year."""
    if snapshot.filtered:
        raise SnapshotContractError(f"snapshot {snapshot.year} is already filtered")
    if threshold < 0:
        raise SnapshotContractError("dust threshold must be non-negative")
    return YearSnapshot(
        year=snapshot.year,
        edges=tuple(edge for edge in snapshot.edges if edge.w1 > threshold),
        filtered=True,
        threshold=threshold,
        self_loops=snapshot.self_loops,
    )


def filter_coverage(raw: YearSnapshot, filtered: YearSnapshot) -> Tuple[float, float]:
    """(share of volume kept, share of nodes kept) after the dust filter."""
    if raw.edge_count == 0:
        raise UndefinedMetricError(f"coverage is undefined for the empty {raw.year} snapshot")
    volume = Fraction(filtered.total_value, raw.total_value)
    nodes = Fraction(filtered.node_count, raw.node_count)
    return float(volume), float(nodes)
