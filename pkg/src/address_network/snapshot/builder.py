import io
import itertools
import logging
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, NamedTuple, Optional, Tuple

import numpy as np
import pandas as pd

from .. import QUANTA_PER_SATOSHI
from ..flow.types import FlowEdge
from ..utils.errors import SnapshotContractError

logger = logging.getLogger(__name__)


class AggregatedEdge(NamedTuple):
    src: int
    dst: int
    w1: int  # summed value, quanta
    w2: int  # transaction count


@dataclass(frozen=True)
class StripPolicy:
    strip_self_loops: bool = True


@dataclass(frozen=True)
class YearSnapshot:
    """Immutable dual-weighted graph of one calendar year, edges sorted by (src, dst)."""

    year: int
    edges: Tuple[AggregatedEdge, ...]
    filtered: bool = False
    threshold: int = 0
    self_loops: bool = False
    nodes: FrozenSet[int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        nodes = set()
        for edge in self.edges:
            nodes.add(edge.src)
            nodes.add(edge.dst)
        object.__setattr__(self, "nodes", frozenset(nodes))

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def total_value(self) -> int:
        return sum(edge.w1 for edge in self.edges)

    @property
    def total_activity(self) -> int:
        return sum(edge.w2 for edge in self.edges)

    def sorted_nodes(self) -> List[int]:
        return sorted(self.nodes)

    def without_self_loops(self) -> "YearSnapshot":
        return YearSnapshot(
            year=self.year,
            edges=tuple(e for e in self.edges if e.src != e.dst),
            filtered=self.filtered,
            threshold=self.threshold,
            self_loops=False,
        )


ACCUMULATED_COLUMNS = ["src", "dst", "sat", "frac", "count"]
PARTITION_MULTIPLIER = 1_000_003
FLOW_BATCH = 100_000


def _combine(flows: pd.DataFrame) -> pd.DataFrame:
    return flows.groupby(["src", "dst"], as_index=False, sort=True)[["sat", "frac", "count"]].sum()


def _edges_of(totals: pd.DataFrame) -> List[AggregatedEdge]:
    return [
        AggregatedEdge(s, d, sat * QUANTA_PER_SATOSHI + frac, c)
        for s, d, sat, frac, c in zip(
            totals["src"].tolist(),
            totals["dst"].tolist(),
            totals["sat"].tolist(),
            totals["frac"].tolist(),
            totals["count"].tolist(),
        )
    ]


def _aggregate_partition(path: str) -> List[AggregatedEdge]:
    spilled = pd.read_csv(path, header=None, names=ACCUMULATED_COLUMNS, dtype=np.int64)
    return _edges_of(_combine(spilled))


class EdgeAccumulator:
    """
    Running (src, dst) totals of one year's flows.

    Values arrive as whole satoshi plus leftover quanta so int64 sums stay
    exact. With `partitions` > 0 the flows are spilled to hash-partitioned
    files and each partition is aggregated on its own.
    """

    COMPACT_AFTER = 16

    def __init__(self, partitions: int = 0, spill_dir: Optional[str] = None):
        self.partitions = partitions
        self.flow_count = 0
        self._frames: List[pd.DataFrame] = []
        self._spill = tempfile.TemporaryDirectory(prefix="spill-", dir=spill_dir) if partitions > 0 else None

    def _path(self, index: int) -> str:
        return os.path.join(self._spill.name, f"part-{index:04d}.csv")

    def add(self, flows: pd.DataFrame) -> None:
        """Add src, dst, sat, frac rows (and optional flow counts)."""
        if flows.empty:
            return
        if "count" not in flows.columns:
            flows = flows.assign(count=1)
        flows = flows[ACCUMULATED_COLUMNS]
        self.flow_count += int(flows["count"].sum())
        if self._spill is None:
            self._frames.append(_combine(flows))
            if len(self._frames) >= self.COMPACT_AFTER:
                self._frames = [_combine(pd.concat(self._frames, ignore_index=True))]
            return
        part = (flows["src"].to_numpy() * PARTITION_MULTIPLIER + flows["dst"].to_numpy()) % self.partitions
        for index, chunk in flows.groupby(part):
            chunk.to_csv(self._path(int(index)), mode="a", header=False, index=False, lineterminator="\n")

    def edges(self, workers: int = 1) -> List[AggregatedEdge]:
        """Aggregated edges sorted by (src, dst)."""
        if self._spill is None:
            if not self._frames:
                return []
            totals = self._frames[0] if len(self._frames) == 1 else _combine(pd.concat(self._frames, ignore_index=True))
            return _edges_of(totals)
        paths = [p for p in map(self._path, range(self.partitions)) if os.path.exists(p)]
        with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
            parts = list(pool.map(_aggregate_partition, paths))
        logger.debug("Aggregated %d spill partitions", len(paths))
        edges = [edge for part in parts for edge in part]
        edges.sort()
        return edges

    def close(self) -> None:
        self._frames = []
        if self._spill is not None:
            self._spill.cleanup()
            self._spill = None


def _checked(flows: Iterable[FlowEdge], year: int, strip_self_loops: bool):
    for flow in flows:
        if flow.timestamp.year != year:
            raise SnapshotContractError(
                f"flow of transaction {flow.tx_id} at {flow.timestamp} is outside year {year}"
            )
        if strip_self_loops and flow.src == flow.dst:
            continue
        sat, frac = divmod(flow.value, QUANTA_PER_SATOSHI)
        yield flow.src, flow.dst, sat, frac


def build_snapshot(
    flows: Iterable[FlowEdge],
    year: int,
    policy: StripPolicy = StripPolicy(),
    partitions: int = 0,
    spill_dir: Optional[str] = None,
    workers: int = 1,
) -> YearSnapshot:
    """
    Merge a year's flows into one edge per ordered pair: w1 sums the values,
    w2 counts the flows.
    """
    accumulator = EdgeAccumulator(partitions, spill_dir)
    try:
        rows = _checked(flows, year, policy.strip_self_loops)
        while True:
            batch = list(itertools.islice(rows, FLOW_BATCH))
            if not batch:
                break
            accumulator.add(pd.DataFrame.from_records(batch, columns=ACCUMULATED_COLUMNS[:4]))
        edges = accumulator.edges(workers)
    finally:
        accumulator.close()
    return YearSnapshot(year=year, edges=tuple(edges), self_loops=not policy.strip_self_loops)


def write_snapshot(snapshot: YearSnapshot, path: str) -> None:
    """Sorted 'src,dst,w1,w2' rows under a header carrying year, threshold and flags."""
    with io.open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(
            f"# year={snapshot.year} threshold={snapshot.threshold} "
            f"filtered={int(snapshot.filtered)} self_loops={int(snapshot.self_loops)}\n"
        )
        f.write("src,dst,w1,w2\n")
        for edge in snapshot.edges:
            f.write(f"{edge.src},{edge.dst},{edge.w1},{edge.w2}\n")


def read_snapshot(path: str) -> YearSnapshot:
    with io.open(path, "r", encoding="utf-8") as f:
        meta_line = f.readline()
        if not meta_line.startswith("# "):
            raise SnapshotContractError(f"{path}: missing snapshot header")
        meta = dict(item.split("=", 1) for item in meta_line[2:].split())
        f.readline()
        edges = []
        for line in f:
            src, dst, w1, w2 = line.strip().split(",")
            edges.append(AggregatedEdge(int(src), int(dst), int(w1), int(w2)))
    return YearSnapshot(
        year=int(meta["year"]),
        edges=tuple(edges),
        filtered=meta["filtered"] == "1",
        threshold=int(meta["threshold"]),
        self_loops=meta["self_loops"] == "1",
    )
