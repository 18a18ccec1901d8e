"""
Column-wise flow attribution for a block-aligned batch of transactions.

Transactions with one sender pass their outputs through as flows and their
whole fee to that sender without leaving numpy. Pre-attributed transactions
keep the extract's own pairs. Only transactions with several inputs go
through the exact integer apportioning of `split_spend`, one at a time.
"""
from collections import defaultdict
from typing import Dict, List, NamedTuple, Sequence, Tuple

import numpy as np
import pandas as pd

from .. import QUANTA_PER_SATOSHI
from .attribution import split_spend
from .rounding import equal_shares
from .types import TransactionGroup

# transaction kinds
COINBASE = 0
SINGLE = 1  # one sender: flows are the outputs
SPLIT = 2  # several inputs, apportioned by largest remainder
ATTRIBUTED = 3  # plain extract with per-sender amounts
EMPTY = 4  # no positive input, nothing to emit

FLOW_COLUMNS = ("year", "src", "dst", "sat", "frac")
FEE_COLUMNS = ("year", "src", "sat", "frac")
CREDIT_COLUMNS = ("year", "dst", "sat", "ts")


class TransactionBatch(NamedTuple):
    """
    Assembled transactions of whole blocks, amounts in satoshi.

    `transactions` is indexed by transaction code (0..n-1 in block order) with
    block, tx_id, ts, year, kind, sender, t_in, t_out and equal_share columns;
    every leg table refers to it through its `tx` column.
    """

    transactions: pd.DataFrame
    inputs: pd.DataFrame  # tx, src, sat (positive input legs)
    outputs: pd.DataFrame  # tx, dst, sat (agreed positive outputs)
    attributed: pd.DataFrame  # tx, src, dst, sat (pre-attributed pairs)
    senders: pd.DataFrame  # tx, src (pair senders of equal-share transactions)
    credits: pd.DataFrame  # tx, dst, sat (positive coinbase outputs)

    @property
    def equal_share_count(self) -> int:
        return int(self.transactions["equal_share"].sum())

    @property
    def pre_attributed_count(self) -> int:
        return int((self.transactions["kind"] == ATTRIBUTED).sum())


class BatchFlows(NamedTuple):
    """Flows, fee debits and coinbase credits tagged with their calendar year."""

    flows: pd.DataFrame  # year, src, dst, sat, frac
    fees: pd.DataFrame  # year, src, sat, frac
    credits: pd.DataFrame  # year, dst, sat, ts


def empty_frame(columns: Sequence[str]) -> pd.DataFrame:
    return pd.DataFrame({c: np.zeros(0, dtype=np.int64) for c in columns})


def _concat(frames: List[pd.DataFrame], columns: Sequence[str]) -> pd.DataFrame:
    frames = [f for f in frames if len(f)]
    if not frames:
        return empty_frame(columns)
    return pd.concat(frames, ignore_index=True)[list(columns)]


def _legs_by_tx(legs: pd.DataFrame, key: str, wanted: np.ndarray) -> Dict[int, List[Tuple[int, int]]]:
    """(address, quanta) legs of the wanted transactions, in address order."""
    chosen = legs[wanted[legs["tx"].to_numpy()]]
    grouped: Dict[int, List[Tuple[int, int]]] = defaultdict(list)
    amounts = (chosen["sat"].to_numpy() * QUANTA_PER_SATOSHI).tolist()
    for tx, address, amount in zip(chosen["tx"].tolist(), chosen[key].tolist(), amounts):
        grouped[tx].append((address, amount))
    return grouped


def _apportioned(batch: TransactionBatch) -> Tuple[pd.DataFrame, pd.DataFrame]:
    txs = batch.transactions
    codes = np.flatnonzero(txs["kind"].to_numpy() == SPLIT)
    if not len(codes):
        return empty_frame(FLOW_COLUMNS), empty_frame(FEE_COLUMNS)

    wanted = np.zeros(len(txs), dtype=bool)
    wanted[codes] = True
    inputs = _legs_by_tx(batch.inputs, "src", wanted)
    outputs = _legs_by_tx(batch.outputs, "dst", wanted)
    senders: Dict[int, List[int]] = defaultdict(list)
    for tx, src in zip(batch.senders["tx"].tolist(), batch.senders["src"].tolist()):
        senders[tx].append(src)

    years = txs["year"].to_numpy()[codes].tolist()
    tx_ids = txs["tx_id"].to_numpy()[codes].tolist()
    stamps = pd.DatetimeIndex(txs["ts"].to_numpy()[codes]).tz_localize("UTC").to_pydatetime()

    flow_rows = []
    fee_rows = []
    for code, year, tx_id, stamp in zip(codes.tolist(), years, tx_ids, stamps):
        legs_out = tuple(outputs.get(code, ()))
        legs_in = inputs.get(code)
        if legs_in is None:
            legs_in = equal_shares(sum(amount for _, amount in legs_out), senders.get(code, []))
        tx = TransactionGroup(tx_id=tx_id, timestamp=stamp, coinbase=False, inputs=tuple(legs_in), outputs=legs_out)
        pairs, fees = split_spend(tx)
        for src, dst, value in pairs:
            sat, frac = divmod(value, QUANTA_PER_SATOSHI)
            flow_rows.append((year, src, dst, sat, frac))
        for src, value in fees.items():
            sat, frac = divmod(value, QUANTA_PER_SATOSHI)
            fee_rows.append((year, src, sat, frac))

    flows = pd.DataFrame.from_records(flow_rows, columns=list(FLOW_COLUMNS)) if flow_rows else empty_frame(FLOW_COLUMNS)
    fees_frame = pd.DataFrame.from_records(fee_rows, columns=list(FEE_COLUMNS)) if fee_rows else empty_frame(FEE_COLUMNS)
    return flows, fees_frame


def attribute_batch(batch: TransactionBatch) -> BatchFlows:
    """Year-tagged flows, fee debits and coinbase credits of every transaction in the batch."""
    txs = batch.transactions
    year = txs["year"].to_numpy()
    kind = txs["kind"].to_numpy()
    sender = txs["sender"].to_numpy()

    out_tx = batch.outputs["tx"].to_numpy()
    single = kind[out_tx] == SINGLE
    passed = pd.DataFrame(
        {
            "year": year[out_tx[single]],
            "src": sender[out_tx[single]],
            "dst": batch.outputs["dst"].to_numpy()[single],
            "sat": batch.outputs["sat"].to_numpy()[single],
            "frac": 0,
        }
    )

    fee = txs["t_in"].to_numpy() - txs["t_out"].to_numpy()
    paying = np.flatnonzero((kind == SINGLE) & (fee > 0))
    single_fees = pd.DataFrame({"year": year[paying], "src": sender[paying], "sat": fee[paying], "frac": 0})

    given_tx = batch.attributed["tx"].to_numpy()
    given = pd.DataFrame(
        {
            "year": year[given_tx],
            "src": batch.attributed["src"].to_numpy(),
            "dst": batch.attributed["dst"].to_numpy(),
            "sat": batch.attributed["sat"].to_numpy(),
            "frac": 0,
        }
    )

    split_flows, split_fees = _apportioned(batch)

    credit_tx = batch.credits["tx"].to_numpy()
    credits = pd.DataFrame(
        {
            "year": year[credit_tx],
            "dst": batch.credits["dst"].to_numpy(),
            "sat": batch.credits["sat"].to_numpy(),
            "ts": txs["ts"].to_numpy()[credit_tx],
        }
    )
    return BatchFlows(
        flows=_concat([passed, given, split_flows], FLOW_COLUMNS),
        fees=_concat([single_fees, split_fees], FEE_COLUMNS),
        credits=credits,
    )
