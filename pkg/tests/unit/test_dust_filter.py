import os
import random
import sys
import unittest

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '../../src'))

from address_network import DEFAULT_DUST_THRESHOLD, QUANTA_PER_SATOSHI
from address_network.snapshot import AggregatedEdge, YearSnapshot, apply_dust_filter, filter_coverage
from address_network.utils.errors import SnapshotContractError, UndefinedMetricError


def snapshot_of(edges, year=2013):
    return YearSnapshot(year=year, edges=tuple(sorted(edges)))


class TestDustFilter(unittest.TestCase):

    def test_default_threshold_is_ten_thousand_satoshi(self):
        self.assertEqual(DEFAULT_DUST_THRESHOLD, 10_000 * QUANTA_PER_SATOSHI)

    def test_boundary_is_strict(self):
        at = AggregatedEdge(0, 1, DEFAULT_DUST_THRESHOLD, 1)
        above = AggregatedEdge(1, 2, DEFAULT_DUST_THRESHOLD + 1, 1)
        filtered = apply_dust_filter(snapshot_of([at, above]))

        self.assertEqual(filtered.edges, (above,))
        self.assertEqual(filtered.nodes, frozenset({1, 2}))
        self.assertTrue(filtered.filtered)
        self.assertEqual(filtered.threshold, DEFAULT_DUST_THRESHOLD)

    def test_zero_threshold_keeps_everything(self):
        raw = snapshot_of([AggregatedEdge(0, 1, 1, 1), AggregatedEdge(2, 1, 5, 3)])
        self.assertEqual(apply_dust_filter(raw, 0).edges, raw.edges)

    def test_threshold_monotonicity(self):
        rng = random.Random(17)
        for _ in range(100):
            pairs = {(rng.randint(0, 30), rng.randint(0, 30)) for _ in range(rng.randint(1, 80))}
            raw = snapshot_of([AggregatedEdge(s, d, rng.randint(1, 10**9), rng.randint(1, 5)) for s, d in pairs])
            low, high = sorted(rng.sample(range(0, 10**9), 2))

            kept_low = set(apply_dust_filter(raw, low).edges)
            kept_high = set(apply_dust_filter(raw, high).edges)
            self.assertLessEqual(kept_high, kept_low)
            self.assertEqual(kept_low, {e for e in raw.edges if e.w1 > low})

    def test_contract(self):
        raw = snapshot_of([AggregatedEdge(0, 1, 1, 1)])
        with self.assertRaises(SnapshotContractError):
            apply_dust_filter(apply_dust_filter(raw))
        with self.assertRaises(SnapshotContractError):
            apply_dust_filter(raw, -1)


class TestFilterCoverage(unittest.TestCase):

    def test_identity(self):
        raw = snapshot_of([AggregatedEdge(0, 1, 10**9, 1)])
        self.assertEqual(filter_coverage(raw, apply_dust_filter(raw, 0)), (1.0, 1.0))

    def test_known_dust_mass(self):
        """10% of the volume sits on dust edges."""
        big = [AggregatedEdge(i, i + 1, 9 * 10**9, 1) for i in range(0, 20, 2)]
        dust = [AggregatedEdge(i, i + 1, 10**8, 1) for i in range(100, 300, 2)]
        raw = snapshot_of(big + dust)
        volume, nodes = filter_coverage(raw, apply_dust_filter(raw))

        self.assertAlmostEqual(volume, 0.9, places=12)
        self.assertAlmostEqual(nodes, 20 / 220, places=12)

    def test_empty_year_is_undefined(self):
        empty = snapshot_of([])
        with self.assertRaises(UndefinedMetricError):
            filter_coverage(empty, apply_dust_filter(empty))


if __name__ == '__main__':
    unittest.main()
