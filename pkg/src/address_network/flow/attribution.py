import logging
from typing import Dict, List, Tuple

from ..utils.errors import FlowContractError
from .rounding import allocate_largest_remainder
from .types import CoinbaseCredit, FlowEdge, Pair, TransactionGroup

logger = logging.getLogger(__name__)


def _check_amounts(tx: TransactionGroup) -> None:
    if any(amount < 0 for _, amount in tx.inputs + tx.outputs):
        raise FlowContractError(f"transaction {tx.tx_id} has a negative amount")
    if tx.t_in < tx.t_out:
        raise FlowContractError(
            f"transaction {tx.tx_id} spends {tx.t_out} quanta from {tx.t_in} quanta of inputs"
        )


def _check_spend(tx: TransactionGroup) -> None:
    if tx.coinbase:
        raise FlowContractError(f"transaction {tx.tx_id} is a coinbase; use coinbase_credits")
    _check_amounts(tx)


def _input_row_totals(tx: TransactionGroup) -> List[int]:
    """v_in(i) - fee_share(i) per input, apportioned so the rows sum to t_out."""
    return allocate_largest_remainder(
        tx.t_out,
        [amount for _, amount in tx.inputs],
        [address for address, _ in tx.inputs],
    )


def _pairs(tx: TransactionGroup, row_totals: List[int]) -> List[Pair]:
    if len(tx.inputs) == 1:
        # one sender keeps every output as it is
        src = tx.inputs[0][0]
        return [(src, dst, amount) for dst, amount in tx.outputs if amount > 0]

    output_weights = [amount for _, amount in tx.outputs]
    output_keys = [address for address, _ in tx.outputs]
    pairs = []
    for (src, _), row_total in zip(tx.inputs, row_totals):
        if row_total == 0:
            continue
        parts = allocate_largest_remainder(row_total, output_weights, output_keys)
        pairs.extend((src, dst, value) for dst, value in zip(output_keys, parts) if value > 0)
    return pairs


def _fees(tx: TransactionGroup, row_totals: List[int]) -> Dict[int, int]:
    shares: Dict[int, int] = {}
    for (address, amount), row_total in zip(tx.inputs, row_totals):
        fee = amount - row_total
        if fee:
            shares[address] = shares.get(address, 0) + fee
    return shares


def attribute_pairs(tx: TransactionGroup) -> List[Pair]:
    """
    Fee-adjusted (src, dst, quanta) flows of one spending transaction.

    v(i->j) = (v_in(i) - t_fee * v_in(i) / t_in) * v_out(j) / t_out, evaluated
    exactly in integers: t_out is first apportioned over the inputs, then each
    input's share over the outputs, both by largest remainder. Zero flows are
    not emitted. Pre-attributed transactions return their flows unchanged.
    """
    _check_spend(tx)
    if tx.attributed:
        return list(tx.attributed)
    if tx.t_out == 0:
        logger.debug("Transaction %s has no positive output; no flows emitted", tx.tx_id)
        return []
    return _pairs(tx, _input_row_totals(tx))


def attribute_flows(tx: TransactionGroup) -> List[FlowEdge]:
    return [FlowEdge(src, dst, value, tx.tx_id, tx.timestamp) for src, dst, value in attribute_pairs(tx)]


def fee_shares(tx: TransactionGroup) -> Dict[int, int]:
    """Per-input fee debit; the shares sum to t_fee exactly."""
    if tx.coinbase:
        return {}
    _check_amounts(tx)
    if tx.t_in == 0 or tx.attributed:
        return {}
    return _fees(tx, _input_row_totals(tx))


def split_spend(tx: TransactionGroup) -> Tuple[List[Pair], Dict[int, int]]:
    """Flows and fee shares of a spending transaction, apportioning t_out once."""
    _check_spend(tx)
    if tx.attributed:
        return list(tx.attributed), {}
    if tx.t_in == 0:
        return [], {}
    row_totals = _input_row_totals(tx)
    pairs = _pairs(tx, row_totals) if tx.t_out else []
    return pairs, _fees(tx, row_totals)


def coinbase_credits(tx: TransactionGroup) -> List[CoinbaseCredit]:
    if not tx.coinbase:
        raise FlowContractError(f"transaction {tx.tx_id} is not a coinbase")
    return [
        CoinbaseCredit(address, amount, tx.timestamp)
        for address, amount in tx.outputs
        if amount > 0
    ]


def split_transaction(tx: TransactionGroup) -> Tuple[List[FlowEdge], List[CoinbaseCredit], Dict[int, int]]:
    """Flows, coinbase credits and fee shares of any transaction."""
    if tx.coinbase:
        return [], coinbase_credits(tx), {}
    return attribute_flows(tx), [], fee_shares(tx)
