from .attribution import attribute_flows, attribute_pairs, coinbase_credits, fee_shares, split_spend, split_transaction
from .batch import BatchFlows, TransactionBatch, attribute_batch
from .rounding import allocate_largest_remainder, equal_shares
from .types import CoinbaseCredit, FlowEdge, TransactionGroup

__all__ = [
    "attribute_flows",
    "attribute_pairs",
    "coinbase_credits",
    "fee_shares",
    "split_spend",
    "split_transaction",
    "BatchFlows",
    "TransactionBatch",
    "attribute_batch",
    "allocate_largest_remainder",
    "equal_shares",
    "CoinbaseCredit",
    "FlowEdge",
    "TransactionGroup",
]
