import math
import os
import random
import sys
import unittest

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '../../src'))

from address_network.metrics import connected_components, top_percent_component_membership, top_percent_edge_share
from address_network.metrics.concentration import top_count
from address_network.snapshot import AggregatedEdge, YearSnapshot
from address_network.utils.errors import InsufficientGraphError


def graph(weighted_pairs, year=2019):
    return YearSnapshot(year, tuple(sorted(AggregatedEdge(s, d, 1, w) for (s, d), w in weighted_pairs.items())))


class TestTopShare(unittest.TestCase):

    def test_top_count(self):
        self.assertEqual(top_count(0.01, 100), 1)
        self.assertEqual(top_count(0.01, 148), 2)
        self.assertEqual(top_count(0.01, 1), 1)

    def test_uniform_in_degrees(self):
        cycle = graph({(i, (i + 1) % 100): 1 for i in range(100)})
        in_share, out_share = top_percent_edge_share(cycle)
        self.assertAlmostEqual(in_share, 0.01, places=12)
        self.assertAlmostEqual(out_share, 0.01, places=12)

    def test_single_receiver(self):
        star = graph({(i, 0): 1 for i in range(1, 100)})
        in_share, out_share = top_percent_edge_share(star)
        self.assertEqual(in_share, 1.0)
        self.assertAlmostEqual(out_share, 1 / 99, places=12)

    def test_weighting(self):
        snapshot = graph({(0, 1): 1, (2, 3): 1, (4, 3): 1, (5, 6): 10})
        self.assertAlmostEqual(top_percent_edge_share(snapshot, p=0.1)[0], 10 / 13, places=12)
        self.assertAlmostEqual(top_percent_edge_share(snapshot, p=0.1, weighted=False)[0], 2 / 4, places=12)

    def test_empty(self):
        with self.assertRaises(InsufficientGraphError):
            top_percent_edge_share(graph({}))


class TestMembership(unittest.TestCase):

    def test_strongly_connected(self):
        cycle = graph({(i, (i + 1) % 20): 1 for i in range(20)})
        self.assertEqual(tuple(top_percent_component_membership(cycle, p=0.2)), (1.0, 1.0, 1.0, 1.0))

    def test_isolated_receivers(self):
        pairs = {(0, 1): 1, (1, 0): 1}
        pairs.update({(i, 50): 1 for i in range(2, 10)})
        membership = top_percent_component_membership(graph(pairs), p=0.01)
        self.assertEqual(membership.lscc_in, 0.0)
        self.assertEqual(membership.lwcc_in, 1.0)

    def test_matches_brute_force(self):
        rng = random.Random(41)
        for _ in range(200):
            n = rng.randint(2, 60)
            pairs = {
                (u, v): rng.randint(1, 5)
                for u in range(n)
                for v in range(n)
                if u != v and rng.random() < 0.06
            }
            if not pairs:
                continue
            snapshot = graph(pairs)
            p = rng.choice([0.01, 0.1, 0.3])

            nodes = snapshot.sorted_nodes()
            in_degree = {a: 0 for a in nodes}
            out_degree = {a: 0 for a in nodes}
            for (u, v), w in pairs.items():
                in_degree[v] += w
                out_degree[u] += w
            count = math.ceil(p * len(nodes) - 1e-9)
            top_in = sorted(nodes, key=lambda a: (-in_degree[a], a))[:count]
            top_out = sorted(nodes, key=lambda a: (-out_degree[a], a))[:count]
            lwcc = connected_components(snapshot, "weak").largest()
            lscc = connected_components(snapshot, "strong").largest(min_size=2)

            got = top_percent_component_membership(snapshot, p)
            self.assertAlmostEqual(got.lwcc_in, len(set(top_in) & lwcc) / count, places=12)
            self.assertAlmostEqual(got.lwcc_out, len(set(top_out) & lwcc) / count, places=12)
            self.assertAlmostEqual(got.lscc_in, len(set(top_in) & lscc) / count, places=12)
            self.assertAlmostEqual(got.lscc_out, len(set(top_out) & lscc) / count, places=12)


if __name__ == '__main__':
    unittest.main()
