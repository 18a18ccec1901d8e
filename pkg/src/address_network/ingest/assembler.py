import logging
from dataclasses import dataclass, field
from datetime import datetime
from typing import Dict, Iterable, List, Tuple

from .. import QUANTA_PER_SATOSHI
from ..flow.rounding import equal_shares
from ..flow.types import TransactionGroup
from ..utils.errors import TransactionGroupError
from .address_dictionary import AddressDictionary
from .records import TransactionRecord

logger = logging.getLogger(__name__)


@dataclass
class _PendingGroup:
    order: int
    block_number: int
    tx_id: str
    coinbase: bool
    timestamp: datetime
    coinbase_outputs: Dict[int, int] = field(default_factory=dict)
    input_legs: Dict[int, int] = field(default_factory=dict)
    pair_legs: Dict[int, Dict[int, int]] = field(default_factory=dict)


def _add(bucket: Dict[int, int], address: int, amount: int) -> None:
    bucket[address] = bucket.get(address, 0) + amount


def _legs(bucket: Dict[int, int]) -> Tuple[Tuple[int, int], ...]:
    return tuple(
        (address, amount * QUANTA_PER_SATOSHI)
        for address, amount in sorted(bucket.items())
        if amount > 0
    )


class TransactionAssembler:
    """
    Buckets leg rows by (block_number, transaction_id) and turns each bucket
    into a TransactionGroup. Addresses are interned in row order.
    """

    def __init__(self, dictionary: AddressDictionary):
        self.dictionary = dictionary
        self._groups: Dict[Tuple[int, str], _PendingGroup] = {}
        self.equal_share_count = 0
        self.pre_attributed_count = 0
        self.rows = 0

    def add(self, record: TransactionRecord) -> None:
        self.rows += 1
        key = (record.block_number, record.transaction_id)
        group = self._groups.get(key)
        if group is None:
            group = _PendingGroup(
                order=len(self._groups),
                block_number=record.block_number,
                tx_id=record.transaction_id,
                coinbase=record.is_coinbase,
                timestamp=record.timestamp,
            )
            self._groups[key] = group
        elif group.coinbase != record.is_coinbase or group.timestamp != record.timestamp:
            raise TransactionGroupError(
                f"transaction {record.transaction_id} in block {record.block_number} "
                "mixes coinbase flags or timestamps"
            )

        if record.is_coinbase:
            _add(group.coinbase_outputs, self.dictionary.intern(record.output_address), record.value)
            return
        src = self.dictionary.intern(record.input_address)
        if record.output_address is None:
            _add(group.input_legs, src, record.value)
        else:
            dst = self.dictionary.intern(record.output_address)
            _add(group.pair_legs.setdefault(src, {}), dst, record.value)

    def add_all(self, records: Iterable[TransactionRecord]) -> "TransactionAssembler":
        for record in records:
            self.add(record)
        return self

    def _pre_attributed(self, group: _PendingGroup) -> TransactionGroup:
        # plain extract whose senders pay different amounts: the rows are the flows
        self.pre_attributed_count += 1
        pairs = tuple(
            (src, dst, amount)
            for src in sorted(group.pair_legs)
            for dst, amount in _legs(group.pair_legs[src])
        )
        sent: Dict[int, int] = {}
        received: Dict[int, int] = {}
        for src, dst, amount in pairs:
            _add(sent, src, amount)
            _add(received, dst, amount)
        return TransactionGroup(
            tx_id=group.tx_id,
            timestamp=group.timestamp,
            coinbase=False,
            inputs=tuple(sorted(sent.items())),
            outputs=tuple(sorted(received.items())),
            block_number=group.block_number,
            attributed=pairs,
        )

    def _finish_spend(self, group: _PendingGroup) -> TransactionGroup:
        output_maps = list(group.pair_legs.values())
        outputs = _legs(output_maps[0]) if output_maps else ()
        if any(_legs(other) != outputs for other in output_maps[1:]):
            if not group.input_legs:
                return self._pre_attributed(group)
            raise TransactionGroupError(
                f"transaction {group.tx_id}: pair rows disagree on output amounts"
            )

        if group.input_legs:
            stray = set(group.pair_legs) - set(group.input_legs)
            if stray:
                raise TransactionGroupError(
                    f"transaction {group.tx_id}: pair rows name inputs without input rows"
                )
            inputs = _legs(group.input_legs)
        else:
            # plain extract: zero fee, equal input shares
            self.equal_share_count += 1
            inputs = equal_shares(sum(amount for _, amount in outputs), sorted(group.pair_legs))

        tx = TransactionGroup(
            tx_id=group.tx_id,
            timestamp=group.timestamp,
            coinbase=False,
            inputs=inputs,
            outputs=outputs,
            block_number=group.block_number,
        )
        if tx.t_in < tx.t_out:
            raise TransactionGroupError(
                f"transaction {group.tx_id}: outputs ({tx.t_out}) exceed inputs ({tx.t_in})"
            )
        return tx

    def finish(self) -> List[TransactionGroup]:
        ordered = sorted(self._groups.values(), key=lambda g: (g.block_number, g.order))
        result = []
        for group in ordered:
            if group.coinbase:
                result.append(
                    TransactionGroup(
                        tx_id=group.tx_id,
                        timestamp=group.timestamp,
                        coinbase=True,
                        outputs=_legs(group.coinbase_outputs),
                        block_number=group.block_number,
                    )
                )
            else:
                result.append(self._finish_spend(group))
        if self.equal_share_count:
            logger.info(
                "%d transactions had no input rows and were split in equal input shares",
                self.equal_share_count,
            )
        if self.pre_attributed_count:
            logger.info(
                "%d transactions without input rows had per-sender amounts and were kept as given",
                self.pre_attributed_count,
            )
        logger.info("Assembled %d transactions from %d rows", len(result), self.rows)
        return result


def assemble_transactions(records: Iterable[TransactionRecord], dictionary: AddressDictionary) -> List[TransactionGroup]:
    return TransactionAssembler(dictionary).add_all(records).finish()
