import os
import random
import sys
import tempfile
import unittest
from datetime import datetime, timedelta, timezone

import pandas as pd

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '../../src'))

from address_network.flow import FlowEdge
from address_network.snapshot import (
    AggregatedEdge,
    EdgeAccumulator,
    StripPolicy,
    build_snapshot,
    read_snapshot,
    write_snapshot,
)
from address_network.utils.errors import SnapshotContractError


def flow(src, dst, value, year=2012, tx="t"):
    return FlowEdge(src, dst, value, tx, datetime(year, 6, 1, tzinfo=timezone.utc))


def random_flows(rng, count, years):
    flows = []
    for n in range(count):
        year = rng.choice(years)
        ts = datetime(year, 1, 1, tzinfo=timezone.utc) + timedelta(seconds=rng.randint(0, 364 * 86400))
        flows.append(FlowEdge(rng.randint(0, 40), rng.randint(0, 40), rng.randint(1, 10**6), str(n), ts))
    return flows


class TestBuildSnapshot(unittest.TestCase):

    def test_parallel_flows_merge(self):
        snapshot = build_snapshot([flow(0, 1, 10), flow(0, 1, 20, tx="u")], 2012)
        self.assertEqual(snapshot.edges, (AggregatedEdge(0, 1, 30, 2),))
        self.assertEqual(snapshot.nodes, frozenset({0, 1}))
        self.assertFalse(snapshot.filtered)

    def test_self_loops(self):
        stripped = build_snapshot([flow(0, 0, 5)], 2012)
        self.assertEqual(stripped.edge_count, 0)
        self.assertEqual(stripped.node_count, 0)

        kept = build_snapshot([flow(0, 0, 5), flow(0, 1, 5)], 2012, StripPolicy(strip_self_loops=False))
        self.assertEqual(kept.edges, (AggregatedEdge(0, 0, 5, 1), AggregatedEdge(0, 1, 5, 1)))
        self.assertTrue(kept.self_loops)
        self.assertEqual(kept.without_self_loops().edges, (AggregatedEdge(0, 1, 5, 1),))

    def test_random_flows_per_year_totals(self):
        rng = random.Random(3)
        flows = random_flows(rng, 1_000, [2014, 2015])
        for year in (2014, 2015):
            year_flows = [f for f in flows if f.timestamp.year == year]
            snapshot = build_snapshot(year_flows, year, StripPolicy(strip_self_loops=False))

            self.assertEqual(snapshot.total_value, sum(f.value for f in year_flows))
            self.assertEqual(snapshot.total_activity, len(year_flows))
            oracle = {}
            for f in year_flows:
                w1, w2 = oracle.get((f.src, f.dst), (0, 0))
                oracle[(f.src, f.dst)] = (w1 + f.value, w2 + 1)
            self.assertEqual({(e.src, e.dst): (e.w1, e.w2) for e in snapshot.edges}, oracle)
            self.assertEqual(list(snapshot.edges), sorted(snapshot.edges))

    def test_flow_outside_year(self):
        with self.assertRaises(SnapshotContractError):
            build_snapshot([flow(0, 1, 10, year=2013)], 2012)

    def test_partitioned_matches_in_memory(self):
        rng = random.Random(9)
        flows = random_flows(rng, 2_000, [2016])
        in_memory = build_snapshot(flows, 2016)
        with tempfile.TemporaryDirectory() as tmp:
            partitioned = build_snapshot(flows, 2016, partitions=7, spill_dir=tmp, workers=3)
        self.assertEqual(partitioned, in_memory)

    def test_flow_order_does_not_matter(self):
        rng = random.Random(21)
        flows = random_flows(rng, 3_000, [2017])
        expected = build_snapshot(flows, 2017)
        for _ in range(5):
            rng.shuffle(flows)
            self.assertEqual(build_snapshot(flows, 2017), expected)


class TestEdgeAccumulator(unittest.TestCase):

    def _frames(self, rng, count):
        for _ in range(count):
            size = rng.randint(1, 60)
            yield pd.DataFrame(
                {
                    "src": [rng.randint(0, 15) for _ in range(size)],
                    "dst": [rng.randint(0, 15) for _ in range(size)],
                    "sat": [rng.randint(0, 10**9) for _ in range(size)],
                    "frac": [rng.randint(0, 9_999) for _ in range(size)],
                }
            )

    def test_partitioned_and_compacted_agree(self):
        frames = list(self._frames(random.Random(6), 3 * EdgeAccumulator.COMPACT_AFTER))
        combined = pd.concat(frames, ignore_index=True)
        oracle = {}
        for src, dst, sat, frac in combined.itertuples(index=False):
            w1, w2 = oracle.get((src, dst), (0, 0))
            oracle[(src, dst)] = (w1 + sat * 10_000 + frac, w2 + 1)

        with tempfile.TemporaryDirectory() as tmp:
            for partitions in (0, 5):
                accumulator = EdgeAccumulator(partitions, tmp)
                for frame in frames:
                    accumulator.add(frame)
                edges = accumulator.edges(workers=2)
                accumulator.close()

                self.assertEqual(accumulator.flow_count, len(combined))
                self.assertEqual(edges, sorted(edges))
                self.assertEqual({(e.src, e.dst): (e.w1, e.w2) for e in edges}, oracle)


class TestSnapshotFiles(unittest.TestCase):

    def test_write_and_read(self):
        snapshot = build_snapshot([flow(3, 1, 10), flow(1, 2, 7), flow(3, 1, 1, tx="u")], 2012)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "2012.csv")
            write_snapshot(snapshot, path)
            with open(path, encoding="utf-8") as f:
                lines = f.read().splitlines()
            restored = read_snapshot(path)

        self.assertEqual(lines[1:], ["src,dst,w1,w2", "1,2,7,1", "3,1,11,2"])
        self.assertEqual(restored, snapshot)


if __name__ == '__main__':
    unittest.main()
