"""
Streaming assembly: leg frames in block order become TransactionBatch
tables without a Python object per row.

The row assembler in `assembler.py` is the reference; this module reaches
the same transactions with pandas group-bys, one batch of whole blocks at a
time.
"""
import logging
from typing import Iterable, Iterator, Optional, Tuple

import numpy as np
import pandas as pd

from ..flow.batch import ATTRIBUTED, COINBASE, EMPTY, SINGLE, SPLIT, TransactionBatch
from ..utils.errors import BlockOrderError, MissingAddressError, TransactionGroupError, ValueFieldError
from .address_dictionary import AddressDictionary

logger = logging.getLogger(__name__)


def complete_blocks(frames: Iterable[pd.DataFrame]) -> Iterator[pd.DataFrame]:
    """
    Regroup leg frames so no block straddles two of them.

    Rows must arrive in nondecreasing block order; the trailing block of each
    frame is held back until a later block shows up.
    """
    carry: Optional[pd.DataFrame] = None
    last_block = -1
    for frame in frames:
        if frame.empty:
            continue
        blocks = frame["block"].to_numpy()
        backwards = np.flatnonzero(np.diff(blocks) < 0)
        if blocks[0] < last_block or len(backwards):
            before, after = (last_block, blocks[0]) if blocks[0] < last_block else (blocks[backwards[0]], blocks[backwards[0] + 1])
            raise BlockOrderError(
                f"block {after} follows block {before}; extracts must be sorted by block_number"
            )
        if carry is not None:
            frame = pd.concat([carry, frame], ignore_index=True)
            blocks = frame["block"].to_numpy()
        last_block = int(blocks[-1])
        cut = int(np.searchsorted(blocks, last_block, side="left"))
        if cut:
            yield frame.iloc[:cut].reset_index(drop=True)
        carry = frame.iloc[cut:]
    if carry is not None and len(carry):
        yield carry.reset_index(drop=True)


def _stripped(values: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Codes and stripped unique keys of a key column."""
    codes, uniques = pd.factorize(values)
    return codes, np.array([u.strip() for u in uniques], dtype=object)


def intern_legs(legs: pd.DataFrame, dictionary: AddressDictionary) -> Tuple[np.ndarray, np.ndarray]:
    """
    Source and destination IDs of every leg, -1 where the column is empty.

    Keys are interned in row order, input before output, as the row
    assembler does.
    """
    keys = np.empty(2 * len(legs), dtype=object)
    keys[0::2] = legs["input"].to_numpy(dtype=object)
    keys[1::2] = legs["output"].to_numpy(dtype=object)
    codes, uniques = _stripped(keys)
    present = uniques != ""
    ids = np.full(len(uniques), -1, dtype=np.int64)
    ids[present] = dictionary.intern_many(uniques[present].tolist())
    interned = ids[codes]
    return interned[0::2], interned[1::2]


def _fail(message: str, tx_ids: np.ndarray, blocks: np.ndarray, codes: np.ndarray, error=TransactionGroupError):
    code = int(codes[0])
    raise error(f"transaction {tx_ids[code]} in block {blocks[code]}: {message}")


def _per_tx(frame: pd.DataFrame, n: int) -> np.ndarray:
    """Satoshi total per transaction code."""
    return frame.groupby("tx")["sat"].sum().reindex(range(n), fill_value=0).to_numpy(dtype=np.int64)


def assemble_batch(legs: pd.DataFrame, dictionary: AddressDictionary) -> TransactionBatch:
    """Whole blocks of leg rows as one TransactionBatch (see `TransactionAssembler`)."""
    src, dst = intern_legs(legs, dictionary)
    block = legs["block"].to_numpy(dtype=np.int64)
    tx_codes, tx_keys = _stripped(legs["tx"].to_numpy(dtype=object))
    coinbase = legs["coinbase"].to_numpy(dtype=bool)
    ts = legs["ts"].to_numpy()
    sat = legs["value"].to_numpy(dtype=np.int64)

    group = (
        pd.DataFrame({"block": block, "tx": tx_codes})
        .groupby(["block", "tx"], sort=False)
        .ngroup()
        .to_numpy()
    )
    _, first = np.unique(group, return_index=True)
    n = len(first)
    tx_ids = tx_keys[tx_codes[first]]
    tx_blocks = block[first]

    if (tx_ids == "").any():
        _fail("transaction_id is empty", tx_ids, tx_blocks, np.flatnonzero(tx_ids == ""), ValueFieldError)
    mixed = (coinbase != coinbase[first][group]) | (ts != ts[first][group])
    if mixed.any():
        _fail("mixes coinbase flags or timestamps", tx_ids, tx_blocks, group[mixed])
    blank = np.where(coinbase, dst < 0, src < 0)
    if blank.any():
        _fail("blank address key", tx_ids, tx_blocks, group[blank], MissingAddressError)

    table = pd.DataFrame({"tx": group, "src": src, "dst": dst, "sat": sat})
    spend = ~coinbase
    credits = table[coinbase].groupby(["tx", "dst"], as_index=False)["sat"].sum()
    credits = credits[credits["sat"] > 0].reset_index(drop=True)
    input_legs = table[spend & (dst < 0)].groupby(["tx", "src"], as_index=False)["sat"].sum()
    pair_legs = table[spend & (dst >= 0)].groupby(["tx", "src", "dst"], as_index=False)["sat"].sum()

    has_inputs = np.zeros(n, dtype=bool)
    has_inputs[input_legs["tx"].to_numpy()] = True
    senders = pair_legs[["tx", "src"]].drop_duplicates().reset_index(drop=True)
    sender_count = np.bincount(senders["tx"].to_numpy(), minlength=n)

    # senders agree when every positive (output, amount) pair is named by all of them
    positive = pair_legs[pair_legs["sat"] > 0]
    named = positive.groupby(["tx", "dst", "sat"]).size()
    named_tx = named.index.get_level_values("tx").to_numpy()
    disagree = np.zeros(n, dtype=bool)
    disagree[named_tx[named.to_numpy() != sender_count[named_tx]]] = True

    if (disagree & has_inputs).any():
        _fail("pair rows disagree on output amounts", tx_ids, tx_blocks, np.flatnonzero(disagree & has_inputs))
    known = pd.MultiIndex.from_frame(input_legs[["tx", "src"]])
    stray = ~pd.MultiIndex.from_frame(senders).isin(known) & has_inputs[senders["tx"].to_numpy()]
    if stray.any():
        _fail("pair rows name inputs without input rows", tx_ids, tx_blocks, senders["tx"].to_numpy()[stray])

    inputs = input_legs[input_legs["sat"] > 0].reset_index(drop=True)
    outputs = (
        positive[~disagree[positive["tx"].to_numpy()]]
        .drop_duplicates(["tx", "dst"])[["tx", "dst", "sat"]]
        .sort_values(["tx", "dst"], kind="stable")
        .reset_index(drop=True)
    )
    attributed = positive[disagree[positive["tx"].to_numpy()]].reset_index(drop=True)

    t_out = _per_tx(outputs, n)
    t_in = _per_tx(inputs, n)
    over = has_inputs & (t_in < t_out)
    if over.any():
        _fail("outputs exceed inputs", tx_ids, tx_blocks, np.flatnonzero(over))

    is_coinbase = coinbase[first]
    input_count = np.bincount(inputs["tx"].to_numpy(), minlength=n)
    equal_share = ~is_coinbase & ~has_inputs & ~disagree
    pre_attributed = ~is_coinbase & ~has_inputs & disagree

    # equal shares carry no fee; attributed pairs are their own outputs
    t_out[pre_attributed] = _per_tx(attributed, n)[pre_attributed]
    t_in[equal_share | pre_attributed] = t_out[equal_share | pre_attributed]

    sender = np.full(n, -1, dtype=np.int64)
    lone_input = input_count[inputs["tx"].to_numpy()] == 1
    sender[inputs["tx"].to_numpy()[lone_input]] = inputs["src"].to_numpy()[lone_input]
    lone_sender = equal_share[senders["tx"].to_numpy()] & (sender_count[senders["tx"].to_numpy()] == 1)
    sender[senders["tx"].to_numpy()[lone_sender]] = senders["src"].to_numpy()[lone_sender]

    kind = np.select(
        [
            is_coinbase,
            pre_attributed,
            has_inputs & (input_count == 0),
            has_inputs & (input_count == 1),
            has_inputs,
            sender_count <= 1,
        ],
        [COINBASE, ATTRIBUTED, EMPTY, SINGLE, SPLIT, SINGLE],
        default=SPLIT,
    ).astype(np.int8)
    # an input-less transaction with no pair rows at all has nothing to split
    kind[equal_share & (sender_count == 0)] = EMPTY

    transactions = pd.DataFrame(
        {
            "block": tx_blocks,
            "tx_id": tx_ids,
            "ts": ts[first],
            "year": pd.DatetimeIndex(ts[first]).year.to_numpy().astype(np.int64),
            "kind": kind,
            "sender": sender,
            "t_in": t_in,
            "t_out": t_out,
            "equal_share": equal_share,
        }
    )
    equal_senders = senders[equal_share[senders["tx"].to_numpy()]].reset_index(drop=True)
    return TransactionBatch(
        transactions=transactions,
        inputs=inputs,
        outputs=outputs,
        attributed=attributed,
        senders=equal_senders,
        credits=credits,
    )


def stream_batches(frames: Iterable[pd.DataFrame], dictionary: AddressDictionary) -> Iterator[TransactionBatch]:
    """Assembled batches of a block-ordered leg stream."""
    equal = pre = count = 0
    for legs in complete_blocks(frames):
        batch = assemble_batch(legs, dictionary)
        equal += batch.equal_share_count
        pre += batch.pre_attributed_count
        count += len(batch.transactions)
        yield batch
    if equal:
        logger.info("%d transactions had no input rows and were split in equal input shares", equal)
    if pre:
        logger.info("%d transactions without input rows had per-sender amounts and were kept as given", pre)
    logger.info("Assembled %d transactions", count)
