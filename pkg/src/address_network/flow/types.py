from dataclasses import dataclass, field
from datetime import datetime
from typing import Tuple

Leg = Tuple[int, int]  # (address ID, amount in quanta)
Pair = Tuple[int, int, int]  # (src, dst, amount in quanta)


@dataclass(frozen=True)
class TransactionGroup:
    """
    All legs of one transaction, amounts in quanta, one entry per address.

    `attributed` holds flows the extract already fixed per sender; inputs and
    outputs are then their per-address totals.
    """

    tx_id: str
    timestamp: datetime
    coinbase: bool
    inputs: Tuple[Leg, ...] = ()
    outputs: Tuple[Leg, ...] = ()
    block_number: int = 0
    attributed: Tuple[Pair, ...] = ()
    t_in: int = field(init=False)
    t_out: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "t_in", sum(amount for _, amount in self.inputs))
        object.__setattr__(self, "t_out", sum(amount for _, amount in self.outputs))

    @property
    def t_fee(self) -> int:
        return 0 if self.coinbase else self.t_in - self.t_out

    @property
    def year(self) -> int:
        return self.timestamp.year


@dataclass(frozen=True)
class FlowEdge:
    src: int
    dst: int
    value: int  # quanta, > 0
    tx_id: str
    timestamp: datetime

    @property
    def is_self_loop(self) -> bool:
        return self.src == self.dst


@dataclass(frozen=True)
class CoinbaseCredit:
    dst: int
    value: int  # quanta, > 0
    timestamp: datetime
