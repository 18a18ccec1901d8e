"""
End-to-end run: ingest -> flows -> yearly snapshots -> metrics -> wealth -> bundle.

The extracts are streamed in block order. Flows are summed into per-year
edge tables as they arrive; a year is closed once the stream is two calendar
years past it. Closed years feed the wealth ledgers in order on the main
thread while their snapshot metrics run on a bounded thread pool. Results
are gathered in year order, so the bundle does not depend on the thread
count.
"""
import logging
import os
from concurrent.futures import Future, ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, NamedTuple, Optional

import pandas as pd
from tqdm import tqdm

from .. import QUANTA_PER_SATOSHI
from ..flow import BatchFlows, CoinbaseCredit, attribute_batch
from ..ingest import AddressDictionary, read_many_frames, stream_batches
from ..metrics import (
    MetricsReport,
    average_local_clustering,
    check_nesting,
    component_size_gini,
    connected_components,
    degree_assortativity,
    degree_distribution,
    degree_vectors,
    density,
    distribution_moments,
    gini,
    top_percent_component_membership,
    top_percent_edge_share,
)
from ..schemas.network_schemas import RunConfig
from ..snapshot import EdgeAccumulator, YearSnapshot, apply_dust_filter, filter_coverage, write_snapshot
from ..utils.errors import BlockOrderError, InsufficientGraphError, UndefinedMetricError
from ..utils.storage import ensure_dir, write_lines
from ..wealth import WealthLedgers, label_rich_sets, read_labels, richness_ratio, top_k, union_growth
from .phases import phase_of_year

logger = logging.getLogger(__name__)

CSV_OPTIONS = {"index": False, "na_rep": "NA", "float_format": "%.12g", "lineterminator": "\n"}

# execution settings that never change the bundle contents
NOT_ECHOED = ("out", "threads", "chunk_rows")

# block timestamps are not monotone around New Year
CLOSE_LAG_YEARS = 2


@dataclass
class YearFlows:
    """Running totals of one calendar year while the stream is read."""

    year: int
    edges: EdgeAccumulator
    credits: List[CoinbaseCredit] = field(default_factory=list)
    fee_frames: List[pd.DataFrame] = field(default_factory=list)
    transactions: int = 0

    def fees(self) -> Dict[int, int]:
        """Fee debit per address, quanta."""
        if not self.fee_frames:
            return {}
        totals = pd.concat(self.fee_frames, ignore_index=True).groupby("src")[["sat", "frac"]].sum()
        return {
            address: sat * QUANTA_PER_SATOSHI + frac
            for address, sat, frac in zip(totals.index.tolist(), totals["sat"].tolist(), totals["frac"].tolist())
        }


class YearStream:
    """
    Routes attributed batches into per-year accumulators and hands back each
    year, in calendar order, once it can no longer receive flows.
    """

    def __init__(self, first_year: int, last_year: int, partitions: int = 0):
        self.first_year = first_year
        self.last_year = last_year
        self.partitions = partitions
        self.open: Dict[int, YearFlows] = {}
        self.next_year: Optional[int] = None
        self.latest: Optional[int] = None
        self.later = 0

    def _bucket(self, year: int) -> YearFlows:
        bucket = self.open.get(year)
        if bucket is None:
            if self.next_year is not None and year < self.next_year:
                raise BlockOrderError(f"a {year} transaction arrives after {year} was closed")
            bucket = self.open[year] = YearFlows(year, EdgeAccumulator(self.partitions))
        return bucket

    def add(self, years: pd.Series, split: BatchFlows) -> List[YearFlows]:
        """Take one batch (transaction years plus its flows); returns the years it closes."""
        for year, count in years.value_counts().sort_index().items():
            year = int(year)
            self.latest = year if self.latest is None else max(self.latest, year)
            if year > self.last_year:
                self.later += int(count)
                continue
            self._bucket(year).transactions += int(count)

        for year, frame in split.flows.groupby("year"):
            if year <= self.last_year:
                self._bucket(int(year)).edges.add(frame[["src", "dst", "sat", "frac"]])
        for year, frame in split.fees.groupby("year"):
            if year <= self.last_year:
                self._bucket(int(year)).fee_frames.append(frame[["src", "sat", "frac"]])
        credits = split.credits
        if len(credits):
            stamps = pd.DatetimeIndex(credits["ts"]).tz_localize("UTC").to_pydatetime()
            for year, dst, sat, stamp in zip(credits["year"].tolist(), credits["dst"].tolist(), credits["sat"].tolist(), stamps):
                if year <= self.last_year:
                    self._bucket(year).credits.append(CoinbaseCredit(dst, sat * QUANTA_PER_SATOSHI, stamp))
        if self.latest is None:
            return []
        return self._close_through(min(self.latest - CLOSE_LAG_YEARS, self.last_year))

    def finish(self) -> List[YearFlows]:
        closed = self._close_through(self.last_year)
        if self.later:
            logger.info("Ignored %d transactions after %d", self.later, self.last_year)
        return closed

    def _close_through(self, limit: int) -> List[YearFlows]:
        if self.next_year is None:
            earliest = min([self.first_year] + list(self.open))
            if earliest > limit:
                return []
            self.next_year = earliest
        closed = []
        while self.next_year <= limit:
            year = self.next_year
            closed.append(self.open.pop(year, None) or YearFlows(year, EdgeAccumulator(self.partitions)))
            self.next_year += 1
        return closed


class YearGraphs(NamedTuple):
    full: YearSnapshot  # self-loops kept, unfiltered
    raw: YearSnapshot  # analysis graph before the dust filter
    filtered: YearSnapshot
    wealth: YearSnapshot  # dust-filtered, self-loops kept


class YearResult(NamedTuple):
    year: int
    report: MetricsReport
    degree_rows: List[Dict]


def build_graphs(cfg: RunConfig, flows: YearFlows) -> YearGraphs:
    threshold = 0 if cfg.no_filter else cfg.dust_threshold
    try:
        edges = flows.edges.edges(workers=cfg.threads)
    finally:
        flows.edges.close()
    full = YearSnapshot(year=flows.year, edges=tuple(edges), self_loops=True)
    raw = full if cfg.keep_self_loops else full.without_self_loops()
    filtered = apply_dust_filter(raw, threshold)
    wealth = full if cfg.wealth_unfiltered else apply_dust_filter(full, threshold)
    return YearGraphs(full, raw, filtered, wealth)


def _guarded(fn: Callable[[], float]) -> Optional[float]:
    try:
        return fn()
    except UndefinedMetricError as e:
        logger.debug("Undefined metric: %s", e)
        return None


class _YearRecorder:
    def __init__(self, year: int):
        self.year = year
        self.phase = phase_of_year(year)
        self.report = MetricsReport()

    def add(self, metric: str, variant: str, fn: Callable[[], float]) -> None:
        self.report.add(self.year, self.phase, metric, variant, _guarded(fn))

    def put(self, metric: str, variant: str, value: Optional[float]) -> None:
        self.report.add(self.year, self.phase, metric, variant, value)


def year_metrics(cfg: RunConfig, graphs: YearGraphs) -> MetricsReport:
    """Every per-year snapshot statistic; undefined values become the NA sentinel."""
    raw, filtered = graphs.raw, graphs.filtered
    rec = _YearRecorder(filtered.year)

    for name, snapshot in (("raw", raw), ("filtered", filtered)):
        rec.put("nodes", name, snapshot.node_count)
        rec.put("edges", name, snapshot.edge_count)
        rec.add("density", name, lambda s=snapshot: density(s))

    coverage = _guarded(lambda: filter_coverage(raw, filtered))
    rec.put("filter_coverage", "volume", coverage[0] if coverage else None)
    rec.put("filter_coverage", "nodes", coverage[1] if coverage else None)

    for name, vector in degree_vectors(filtered).items():
        try:
            moments = distribution_moments(vector.values())
        except UndefinedMetricError:
            moments = None
        for stat in ("mean", "std", "skewness", "kurtosis"):
            rec.put(f"degree_{stat}", name, getattr(moments, stat) if moments else None)
        rec.add("degree_gini", name, lambda v=vector: gini(v.values()))

    rec.add("assortativity", "filtered", lambda: degree_assortativity(filtered))
    rec.add("assortativity", "raw", lambda: degree_assortativity(raw))
    if cfg.directed_assortativity:
        rec.add("assortativity", "filtered_directed", lambda: degree_assortativity(filtered, directed=True))
    sample = (cfg.clustering_sample, cfg.seed) if cfg.clustering_sample else None
    for name, snapshot in (("raw", raw), ("filtered", filtered)):
        rec.add(
            "clustering",
            name,
            lambda s=snapshot: average_local_clustering(s, sample, cfg.clustering_exclude_low_degree),
        )

    weak = connected_components(filtered, "weak")
    strong = connected_components(filtered, "strong")
    check_nesting(weak, strong)
    n = filtered.node_count

    def fraction(members) -> float:
        if n == 0:
            raise InsufficientGraphError(f"component fraction of the empty {filtered.year} snapshot")
        return len(members) / n

    rec.put("wcc_count", "", len(weak.sizes))
    rec.put("scc_count", "", len(strong.sizes))
    rec.add("lwcc_fraction", "", lambda: fraction(weak.largest()))
    rec.add("lscc_fraction", "", lambda: fraction(strong.largest(min_size=2)))
    rec.add("component_size_gini", "weak", lambda: component_size_gini(weak))
    rec.add("component_size_gini", "strong", lambda: component_size_gini(strong))

    weighted = not cfg.unweighted_ranking
    shares = _guarded(lambda: top_percent_edge_share(filtered, cfg.top_percent, weighted))
    rec.put("top_share", "in", shares[0] if shares else None)
    rec.put("top_share", "out", shares[1] if shares else None)
    membership = _guarded(
        lambda: top_percent_component_membership(filtered, cfg.top_percent, weighted, weak, strong)
    )
    for variant in ("lscc_in", "lscc_out", "lwcc_in", "lwcc_out"):
        rec.put("top_membership", variant, getattr(membership, variant) if membership else None)
    return rec.report


def analyse_year(cfg: RunConfig, graphs: YearGraphs) -> YearResult:
    year = graphs.filtered.year
    degree_rows = [
        {"year": year, "vector": vector, "degree": str(degree), "count": count}
        for vector, degree, count in degree_distribution(graphs.filtered)
    ]
    return YearResult(year, year_metrics(cfg, graphs), degree_rows)


class WealthStage:
    """Chains the ledgers year by year and collects the rich-get-richer series."""

    def __init__(self, cfg: RunConfig, ledger_dir: str):
        self.cfg = cfg
        self.ledger_dir = ledger_dir
        self.ledgers = WealthLedgers()
        self.report = MetricsReport()
        self.balance_sets = []
        self.indegree_sets = []

    def advance(self, flows: YearFlows, graphs: YearGraphs) -> None:
        year = flows.year
        ledgers = self.ledgers
        ledgers.advance_year(year, graphs.wealth.edges, flows.fees(), flows.credits)
        if year < self.cfg.years[0]:
            return
        ledgers.write_checkpoint(os.path.join(self.ledger_dir, f"ledger_{year}.csv"))
        phase = phase_of_year(year)
        k = self.cfg.top_k
        for kind, bucket in (("balance", self.balance_sets), ("indegree", self.indegree_sets)):
            rich = top_k(ledgers, kind, k) if len(ledgers) else None
            self.report.add(year, phase, "richness_ratio", kind, _guarded(lambda: richness_ratio(ledgers, kind, k, rich)))
            if rich is not None:
                bucket.append(rich)
        self.report.add(year, phase, "negative_balances", "", ledgers.negative_balance_count)
        self.report.add(year, phase, "ledger_addresses", "", len(ledgers))

    def rich_rows(self, dictionary: AddressDictionary) -> List[Dict]:
        labels = read_labels(self.cfg.labels)
        rows = [
            {
                "year": m.year,
                "kind": m.kind,
                "rank": m.rank,
                "address_id": m.address,
                "address": dictionary.reverse(m.address),
                "value": str(m.value),
                "label": m.label,
            }
            for m in label_rich_sets(self.balance_sets + self.indegree_sets, labels, dictionary.reverse)
        ]
        rows.sort(key=lambda r: (r["year"], r["kind"], r["rank"]))
        return rows

    def union_rows(self) -> List[Dict]:
        k = self.cfg.top_k
        return [
            {
                "year": rich.year,
                "t": t,
                "k": k,
                "balance_union": x,
                "indegree_union": y,
                "max_union": k * t,
            }
            for t, (rich, x, y) in enumerate(
                zip(self.balance_sets, union_growth(self.balance_sets), union_growth(self.indegree_sets)), 1
            )
        ]


def _growth_row(graphs: YearGraphs) -> Dict:
    year = graphs.raw.year
    return {
        "year": year,
        "phase": phase_of_year(year),
        "nodes": graphs.raw.node_count,
        "edges": graphs.raw.edge_count,
        "density": _guarded(lambda: density(graphs.raw)),
        "nodes_filtered": graphs.filtered.node_count,
        "edges_filtered": graphs.filtered.edge_count,
        "density_filtered": _guarded(lambda: density(graphs.filtered)),
    }


def _coverage_row(graphs: YearGraphs) -> Dict:
    raw, filtered = graphs.raw, graphs.filtered
    coverage = _guarded(lambda: filter_coverage(raw, filtered))
    return {
        "year": raw.year,
        "phase": phase_of_year(raw.year),
        "edges_raw": raw.edge_count,
        "edges_filtered": filtered.edge_count,
        "nodes_raw": raw.node_count,
        "nodes_filtered": filtered.node_count,
        "value_raw": str(raw.total_value),
        "value_filtered": str(filtered.total_value),
        "volume_share": coverage[0] if coverage else None,
        "node_share": coverage[1] if coverage else None,
    }


class YearCloser:
    """Per-year work once a year is closed, in calendar order."""

    def __init__(self, cfg: RunConfig, pool: ThreadPoolExecutor, wealth: WealthStage, snapshot_dir: Optional[str]):
        self.cfg = cfg
        self.pool = pool
        self.wealth = wealth
        self.snapshot_dir = snapshot_dir
        self.growth_rows: List[Dict] = []
        self.coverage_rows: List[Dict] = []
        self.pending: List[Future] = []

    def close(self, years: List[YearFlows]) -> None:
        for flows in years:
            graphs = build_graphs(self.cfg, flows)
            self.wealth.advance(flows, graphs)
            logger.debug(
                "Year %d: %d transactions, %d edges (%d after dust filter)",
                flows.year,
                flows.transactions,
                graphs.raw.edge_count,
                graphs.filtered.edge_count,
            )
            if flows.year < self.cfg.years[0]:
                continue
            self.growth_rows.append(_growth_row(graphs))
            self.coverage_rows.append(_coverage_row(graphs))
            if self.snapshot_dir:
                write_snapshot(graphs.filtered, os.path.join(self.snapshot_dir, f"{flows.year}.csv"))
            if not self.cfg.wealth_only:
                self.pending.append(self.pool.submit(analyse_year, self.cfg, graphs))

    def results(self) -> List[YearResult]:
        return [f.result() for f in tqdm(self.pending, desc="years", unit=" year", disable=None)]


def _write_table(rows: List[Dict], columns: List[str], path: str) -> None:
    pd.DataFrame(rows, columns=columns).to_csv(path, **CSV_OPTIONS)


def open_dictionary(cfg: RunConfig, out: str) -> AddressDictionary:
    path = cfg.dictionary or os.path.join(out, "address_dictionary.tsv")
    if not cfg.dictionary and os.path.exists(path):
        logger.warning(
            "Reusing address dictionary %s from an earlier run; IDs continue from it "
            "(pass --dictionary or a fresh --out to start over)",
            path,
        )
    return AddressDictionary(path)


def stream_years(cfg: RunConfig, dictionary: AddressDictionary) -> Iterator[List[YearFlows]]:
    """Closed years, batch by batch, ending with every year through the range end."""
    start, end = cfg.years
    stream = YearStream(start, end, cfg.partitions)
    frames = read_many_frames(cfg.inputs, cfg.chunk_rows, progress=True)
    for batch in stream_batches(frames, dictionary):
        yield stream.add(batch.transactions["year"], attribute_batch(batch))
    yield stream.finish()


def run_pipeline(cfg: RunConfig) -> MetricsReport:
    """Run every stage and write the report bundle under `cfg.out`."""
    start, end = cfg.years
    phase_of_year(start)
    out = ensure_dir(cfg.out)
    ledger_dir = ensure_dir(os.path.join(out, "ledgers"))
    snapshot_dir = ensure_dir(os.path.join(out, "snapshots")) if cfg.write_snapshots else None
    dictionary = open_dictionary(cfg, out)
    logger.info("Processing %d-%d with %d thread(s)", start, end, cfg.threads)

    wealth = WealthStage(cfg, ledger_dir)
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        closer = YearCloser(cfg, pool, wealth, snapshot_dir)
        for years in stream_years(cfg, dictionary):
            closer.close(years)
        dictionary.flush()
        results = closer.results()

    report = MetricsReport()
    for result in results:
        report.extend(result.report)
    report.extend(wealth.report)

    report.write_csv(os.path.join(out, "metrics.csv"))
    report.write_json(os.path.join(out, "metrics.json"))
    _write_table(
        closer.growth_rows,
        ["year", "phase", "nodes", "edges", "density", "nodes_filtered", "edges_filtered", "density_filtered"],
        os.path.join(out, "growth.csv"),
    )
    _write_table(
        closer.coverage_rows,
        [
            "year",
            "phase",
            "edges_raw",
            "edges_filtered",
            "nodes_raw",
            "nodes_filtered",
            "value_raw",
            "value_filtered",
            "volume_share",
            "node_share",
        ],
        os.path.join(out, "filter_coverage.csv"),
    )
    if not cfg.wealth_only:
        _write_table(
            [row for result in results for row in result.degree_rows],
            ["year", "vector", "degree", "count"],
            os.path.join(out, "degree_distribution.csv"),
        )
    _write_table(
        wealth.rich_rows(dictionary),
        ["year", "kind", "rank", "address_id", "address", "value", "label"],
        os.path.join(out, "rich_sets.csv"),
    )
    _write_table(
        wealth.union_rows(),
        ["year", "t", "k", "balance_union", "indegree_union", "max_union"],
        os.path.join(out, "union_growth.csv"),
    )
    write_lines(os.path.join(out, "run_config.conf"), cfg.to_conf_lines(exclude=NOT_ECHOED))
    logger.info(
        "Wrote report bundle for %d years to %s; ledgers cover %d addresses",
        len(closer.growth_rows),
        out,
        len(wealth.ledgers),
    )
    return report
