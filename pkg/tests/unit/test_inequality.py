import math
import os
import random
import sys
import unittest

import numpy as np

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '../../src'))

from address_network.metrics import degree_distribution, degree_vectors, distribution_moments, gini
from address_network.snapshot import AggregatedEdge, YearSnapshot
from address_network.utils.errors import DataValidationError, DegenerateDistributionError, EmptyInputError


def pairwise_gini(values):
    x = np.asarray(values, dtype=np.float64)
    return float(np.abs(x[:, None] - x[None, :]).sum() / (2 * x.size ** 2 * x.mean()))


def textbook_moments(values):
    n = len(values)
    mean = math.fsum(values) / n
    m2 = math.fsum((v - mean) ** 2 for v in values) / n
    m3 = math.fsum((v - mean) ** 3 for v in values) / n
    m4 = math.fsum((v - mean) ** 4 for v in values) / n
    return mean, math.sqrt(m2), m3 / m2 ** 1.5, m4 / m2 ** 2 - 3


class TestGini(unittest.TestCase):

    def test_fixtures(self):
        self.assertEqual(gini([5, 5, 5, 5]), 0.0)
        self.assertAlmostEqual(gini([0, 0, 0, 10]), 0.75, places=12)
        self.assertEqual(gini([42]), 0.0)

    def test_matches_pairwise_oracle(self):
        rng = random.Random(1)
        for _ in range(1_000):
            values = [rng.randint(0, 1_000) for _ in range(rng.randint(1, 500))]
            values[0] += 1
            self.assertLessEqual(abs(gini(values) - pairwise_gini(values)), 1e-9)

    def test_scale_invariance(self):
        rng = random.Random(2)
        values = [rng.random() * 100 for _ in range(300)]
        self.assertAlmostEqual(gini(values), gini([7.5 * v for v in values]), places=12)

    def test_bounds(self):
        rng = random.Random(3)
        for _ in range(200):
            values = [rng.expovariate(1.0) for _ in range(rng.randint(1, 50))]
            g = gini(values)
            self.assertGreaterEqual(g, 0.0)
            self.assertLessEqual(g, (len(values) - 1) / len(values))

    def test_undefined_inputs(self):
        with self.assertRaises(EmptyInputError):
            gini([])
        with self.assertRaises(DegenerateDistributionError):
            gini([0, 0, 0])
        with self.assertRaises(DataValidationError):
            gini([1, -1, 3])


class TestMoments(unittest.TestCase):

    def test_constant_vector(self):
        moments = distribution_moments([5, 5, 5])
        self.assertEqual((moments.mean, moments.std), (5.0, 0.0))
        self.assertTrue(math.isnan(moments.skewness))
        self.assertTrue(math.isnan(moments.kurtosis))

    def test_symmetric_vector(self):
        self.assertAlmostEqual(distribution_moments([1, 2, 3]).skewness, 0.0, places=12)

    def test_excess_kurtosis(self):
        self.assertAlmostEqual(distribution_moments([0, 1]).kurtosis, -2.0, places=12)

    def test_matches_textbook_formulas(self):
        rng = random.Random(4)
        for _ in range(1_000):
            values = [rng.randint(0, 500) for _ in range(rng.randint(2, 200))]
            if len(set(values)) == 1:
                values[0] += 1
            got = distribution_moments(values)
            for a, b in zip(got, textbook_moments(values)):
                self.assertLessEqual(abs(a - b), 1e-9 * max(1.0, abs(b)))

    def test_empty(self):
        with self.assertRaises(EmptyInputError):
            distribution_moments([])


class TestDegreeVectors(unittest.TestCase):

    def test_single_edge(self):
        vectors = degree_vectors(YearSnapshot(2011, (AggregatedEdge(0, 1, 30, 2),)))
        self.assertEqual(vectors["in_activity"].entries, {0: 0, 1: 2})
        self.assertEqual(vectors["out_activity"].entries, {0: 2, 1: 0})
        self.assertEqual(vectors["in_value"].entries, {0: 0, 1: 30})
        self.assertEqual(vectors["out_value"].entries, {0: 30, 1: 0})

    def test_distribution_rows(self):
        edges = (AggregatedEdge(0, 1, 5, 1), AggregatedEdge(0, 2, 5, 1), AggregatedEdge(3, 2, 7, 2))
        rows = degree_distribution(YearSnapshot(2011, edges))
        self.assertEqual(
            rows,
            [
                ("in_activity", 0, 2), ("in_activity", 1, 1), ("in_activity", 3, 1),
                ("out_activity", 0, 2), ("out_activity", 2, 2),
                ("in_value", 0, 2), ("in_value", 5, 1), ("in_value", 12, 1),
                ("out_value", 0, 2), ("out_value", 7, 1), ("out_value", 10, 1),
            ],
        )
        self.assertEqual(degree_distribution(YearSnapshot(2011, ())), [])

    def test_empty_snapshot(self):
        vectors = degree_vectors(YearSnapshot(2011, ()))
        self.assertEqual(sorted(vectors), ["in_activity", "in_value", "out_activity", "out_value"])
        self.assertTrue(all(v.values() == [] for v in vectors.values()))

    def test_value_sums(self):
        rng = random.Random(5)
        pairs = {(rng.randint(0, 50), rng.randint(0, 50)) for _ in range(300)}
        edges = tuple(sorted(AggregatedEdge(s, d, rng.randint(1, 10**6), rng.randint(1, 9)) for s, d in pairs))
        snapshot = YearSnapshot(2011, edges)
        vectors = degree_vectors(snapshot)

        self.assertEqual(vectors["in_value"].total(), snapshot.total_value)
        self.assertEqual(vectors["out_value"].total(), snapshot.total_value)
        self.assertEqual(vectors["in_activity"].total(), snapshot.total_activity)


if __name__ == '__main__':
    unittest.main()
