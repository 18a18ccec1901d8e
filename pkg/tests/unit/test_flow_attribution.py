import os
import random
import sys
import time
import unittest
from datetime import datetime, timezone
from fractions import Fraction

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '../../src'))

from address_network.flow import (
    TransactionGroup,
    allocate_largest_remainder,
    attribute_flows,
    coinbase_credits,
    fee_shares,
    split_transaction,
)
from address_network.utils.errors import FlowContractError

Q = 10_000  # quanta per satoshi
TS = datetime(2013, 5, 1, tzinfo=timezone.utc)


def spend(inputs, outputs, tx_id="t"):
    return TransactionGroup(
        tx_id=tx_id,
        timestamp=TS,
        coinbase=False,
        inputs=tuple(inputs),
        outputs=tuple(outputs),
    )


def exact_flows(tx):
    """Fee-adjusted flows in rational arithmetic."""
    fee = tx.t_in - tx.t_out
    return {
        (src, dst): (Fraction(v_in) - Fraction(fee * v_in, tx.t_in)) * Fraction(v_out, tx.t_out)
        for src, v_in in tx.inputs
        for dst, v_out in tx.outputs
    }


class TestAttributeFlows(unittest.TestCase):

    def test_fee_adjusted_example(self):
        """inputs {A:100, B:300}, outputs {C:90, D:270}, fee 40 satoshi."""
        A, B, C, D = 0, 1, 2, 3
        tx = spend([(A, 100 * Q), (B, 300 * Q)], [(C, 90 * Q), (D, 270 * Q)])
        flows = {(f.src, f.dst): f.value for f in attribute_flows(tx)}

        self.assertEqual(
            flows,
            {(A, C): 225_000, (A, D): 675_000, (B, C): 675_000, (B, D): 2_025_000},
        )
        self.assertEqual(sum(flows.values()), 360 * Q)
        for pair, value in exact_flows(tx).items():
            self.assertEqual(Fraction(flows[pair]), value)

    def test_identity_case(self):
        [flow] = attribute_flows(spend([(0, 50 * Q)], [(1, 50 * Q)]))
        self.assertEqual((flow.src, flow.dst, flow.value), (0, 1, 50 * Q))

    def test_rounding_conserves_outputs(self):
        tx = spend([(0, 7)], [(1, 3), (2, 3)])
        flows = attribute_flows(tx)
        self.assertEqual(sum(f.value for f in flows), 6)

    def test_randomized_conservation(self):
        """10,000 transactions with 1-20 inputs, 1-20 outputs and random fees."""
        rng = random.Random(2024)
        elapsed = 0.0
        for n in range(10_000):
            inputs = [(a, rng.randint(1, 10**9)) for a in rng.sample(range(200), rng.randint(1, 20))]
            t_in = sum(v for _, v in inputs)
            t_out = rng.randint(1, t_in)
            weights = [rng.randint(1, 1000) for _ in range(rng.randint(1, 20))]
            parts = allocate_largest_remainder(t_out, weights, list(range(len(weights))))
            outputs = [(200 + j, v) for j, v in enumerate(parts) if v > 0]
            tx = spend(sorted(inputs), outputs, tx_id=str(n))

            started = time.perf_counter()
            flows = attribute_flows(tx)
            fees = fee_shares(tx)
            elapsed += time.perf_counter() - started

            self.assertEqual(sum(f.value for f in flows), tx.t_out)
            self.assertEqual(sum(fees.values()), tx.t_fee)
            if n % 50 == 0:
                exact = exact_flows(tx)
                emitted = {(f.src, f.dst): f.value for f in flows}
                for pair, value in exact.items():
                    self.assertLess(abs(emitted.get(pair, 0) - value), 2)
        self.assertLess(elapsed, 5.0)

    def test_integral_flows_are_exact_and_scale(self):
        """Inputs a_i*B*h, outputs b_j*A*g: every flow is a_i*b_j*g."""
        rng = random.Random(77)
        for n in range(500):
            a = [rng.randint(1, 50) for _ in range(rng.randint(2, 8))]
            b = [rng.randint(1, 50) for _ in range(rng.randint(1, 8))]
            g = rng.randint(1, 1000)
            h = g + rng.randint(0, 1000)
            tx = spend(
                [(i, a_i * sum(b) * h) for i, a_i in enumerate(a)],
                [(100 + j, b_j * sum(a) * g) for j, b_j in enumerate(b)],
                tx_id=str(n),
            )
            flows = {(f.src, f.dst): f.value for f in attribute_flows(tx)}
            self.assertEqual(
                flows,
                {(i, 100 + j): a_i * b_j * g for i, a_i in enumerate(a) for j, b_j in enumerate(b)},
            )

            c = rng.randint(2, 10**6)
            scaled = spend(
                [(i, v * c) for i, v in tx.inputs],
                [(j, v * c) for j, v in tx.outputs],
            )
            self.assertEqual(
                {(f.src, f.dst): f.value for f in attribute_flows(scaled)},
                {pair: value * c for pair, value in flows.items()},
            )
            self.assertEqual(fee_shares(scaled), {i: fee * c for i, fee in fee_shares(tx).items()})

    def test_scaling_stays_within_rounding(self):
        rng = random.Random(12)
        for n in range(500):
            inputs = [(a, rng.randint(1, 10**6)) for a in range(rng.randint(1, 6))]
            t_in = sum(v for _, v in inputs)
            outputs = [(10 + j, rng.randint(1, t_in // 6 + 1)) for j in range(rng.randint(1, 6))]
            if sum(v for _, v in outputs) > t_in:
                continue
            c = rng.randint(2, 1000)
            base = {(f.src, f.dst): f.value for f in attribute_flows(spend(inputs, outputs))}
            scaled = attribute_flows(spend([(a, v * c) for a, v in inputs], [(d, v * c) for d, v in outputs]))
            for f in scaled:
                self.assertLess(abs(f.value - c * base.get((f.src, f.dst), 0)), 2 * (c + 1))

    def test_each_input_pays_outputs_in_proportion(self):
        rng = random.Random(8)
        for _ in range(300):
            b = [rng.randint(1, 9) for _ in range(rng.randint(2, 6))]
            unit = rng.randint(1, 10**4)
            inputs = [(a, rng.randint(1, 10**6) * sum(b) * unit) for a in range(rng.randint(1, 5))]
            t_in = sum(v for _, v in inputs)
            scale = t_in // (sum(b) * unit)
            outputs = [(50 + j, b_j * unit * scale) for j, b_j in enumerate(b)]
            tx = spend(inputs, outputs)

            by_source = {}
            for f in attribute_flows(tx):
                by_source.setdefault(f.src, {})[f.dst] = f.value
            for src, received in by_source.items():
                row = sum(received.values())
                for j, b_j in enumerate(b):
                    self.assertEqual(received[50 + j] * sum(b), row * b_j)

    def test_single_input_passes_outputs_through(self):
        rng = random.Random(4)
        for _ in range(200):
            outputs = [(1 + j, rng.randint(0, 10**8)) for j in range(rng.randint(1, 10))]
            t_out = sum(v for _, v in outputs)
            tx = spend([(0, t_out + rng.randint(0, 10**6))], outputs)

            flows, _, fees = split_transaction(tx)
            self.assertEqual([(f.dst, f.value) for f in flows], [(d, v) for d, v in outputs if v > 0])
            self.assertEqual(fees, {0: tx.t_fee} if tx.t_fee else {})

    def test_contract_violations(self):
        with self.assertRaises(FlowContractError):
            attribute_flows(spend([(0, 5)], [(1, 6)]))
        coinbase = TransactionGroup("cb", TS, True, outputs=((0, 5),))
        with self.assertRaises(FlowContractError):
            attribute_flows(coinbase)

    def test_zero_output_emits_nothing(self):
        self.assertEqual(attribute_flows(spend([(0, 5)], [])), [])


class TestFeeSharesAndCredits(unittest.TestCase):

    def test_fee_shares_of_example(self):
        tx = spend([(0, 100 * Q), (1, 300 * Q)], [(2, 90 * Q), (3, 270 * Q)])
        self.assertEqual(fee_shares(tx), {0: 10 * Q, 1: 30 * Q})

    def test_coinbase_credits(self):
        tx = TransactionGroup("cb", TS, True, outputs=((4, 50 * 10**8 * Q),))
        [credit] = coinbase_credits(tx)
        self.assertEqual((credit.dst, credit.value), (4, 50 * 10**8 * Q))

        two = TransactionGroup("cb2", TS, True, outputs=((4, 30), (5, 20), (6, 0)))
        credits = coinbase_credits(two)
        self.assertEqual(sum(c.value for c in credits), two.t_out)
        self.assertEqual([c.dst for c in credits], [4, 5])

        with self.assertRaises(FlowContractError):
            coinbase_credits(spend([(0, 5)], [(1, 5)]))

    def test_split_transaction(self):
        flows, credits, fees = split_transaction(spend([(0, 10)], [(1, 7)]))
        self.assertEqual(len(flows), 1)
        self.assertEqual(credits, [])
        self.assertEqual(fees, {0: 3})

        flows, credits, fees = split_transaction(TransactionGroup("cb", TS, True, outputs=((1, 9),)))
        self.assertEqual((flows, fees), ([], {}))
        self.assertEqual(len(credits), 1)


class TestLargestRemainder(unittest.TestCase):

    def test_ties_go_to_lower_key(self):
        self.assertEqual(allocate_largest_remainder(10, [1, 1, 1], [0, 1, 2]), [4, 3, 3])
        self.assertEqual(allocate_largest_remainder(10, [1, 1, 1], [2, 1, 0]), [3, 3, 4])

    def test_sums_exactly(self):
        rng = random.Random(5)
        for _ in range(1_000):
            weights = [rng.randint(0, 50) for _ in range(rng.randint(1, 10))]
            if not any(weights):
                weights[0] = 1
            total = rng.randint(0, 10**6)
            parts = allocate_largest_remainder(total, weights, list(range(len(weights))))
            self.assertEqual(sum(parts), total)
            for part, weight in zip(parts, weights):
                self.assertLess(abs(part - Fraction(total * weight, sum(weights))), 1)

    def test_rejects_bad_weights(self):
        with self.assertRaises(ValueError):
            allocate_largest_remainder(5, [0, 0], [0, 1])


if __name__ == '__main__':
    unittest.main()
