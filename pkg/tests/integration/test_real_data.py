import os
import sys
import tempfile
import unittest

import pandas as pd

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '../../src'))

from address_network.cli import run_pipeline
from address_network.schemas import RunConfig

REAL_DATA = os.getenv("ADDRESS_NETWORK_REAL_DATA")

# published address/edge counts of the unfiltered yearly networks
EXPECTED_GROWTH = {
    2009: (2_873, 3_500),
    2010: (122_183, 176_946),
}


@unittest.skipUnless(REAL_DATA and os.path.exists(REAL_DATA), "set ADDRESS_NETWORK_REAL_DATA to a 2009-2010 extract")
class TestRealData(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.tmp = tempfile.TemporaryDirectory()
        cls.out = os.path.join(cls.tmp.name, "bundle")
        cls.report = run_pipeline(RunConfig(inputs=[REAL_DATA], years="2009-2010", out=cls.out, threads=2))

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()

    def test_growth_counts(self):
        growth = pd.read_csv(os.path.join(self.out, "growth.csv")).set_index("year")
        for year, (nodes, edges) in EXPECTED_GROWTH.items():
            self.assertEqual(int(growth.loc[year, "nodes"]), nodes)
            self.assertEqual(int(growth.loc[year, "edges"]), edges)

    def test_filter_keeps_the_volume(self):
        self.assertGreaterEqual(self.report.value(2010, "filter_coverage", "volume"), 0.99)


if __name__ == '__main__':
    unittest.main()
