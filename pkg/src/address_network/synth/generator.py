"""
Deterministic synthetic chain in the ingest CSV format.

Randomness comes from numpy's PCG64 bit generator seeded with `cfg.seed`.
Every decision consumes uniform doubles from `Generator.random`, drawn in
blocks of 4096 and used strictly in sequence, so a given seed always yields
the same byte stream.
"""
import logging
from datetime import datetime, timedelta, timezone
from typing import Dict, Iterator, List

import numpy as np

from ..flow.rounding import allocate_largest_remainder
from ..ingest.records import TransactionRecord, header_line, serialize_record
from ..schemas.network_schemas import SynthConfig
from ..utils.errors import InfeasibleConfigError
from ..utils.storage import write_lines

logger = logging.getLogger(__name__)

DRAW_BLOCK = 4096
MIN_SPENDABLE = 100_000  # satoshi an address must hold to be picked as a sender
DUST_MIN = 546
DUST_MAX = 10_000


class ChainGenerator:
    def __init__(self, cfg: SynthConfig):
        self.cfg = cfg
        self.rng = np.random.Generator(np.random.PCG64(cfg.seed))
        self._draws: List[float] = []
        self._next = 0

        self.keys: List[str] = []
        self.balance: List[int] = []
        self.urn: List[int] = []  # one ticket per address plus one per received payment
        self.funded: List[int] = []
        self._funded_at: Dict[int, int] = {}

        self.height = 0
        self.tx_count = 0
        self.issued = 0
        self.fees = 0

    def _u(self) -> float:
        if self._next == len(self._draws):
            self._draws = self.rng.random(DRAW_BLOCK).tolist()
            self._next = 0
        value = self._draws[self._next]
        self._next += 1
        return value

    def _pick(self, n: int) -> int:
        return min(int(self._u() * n), n - 1)

    def _new_address(self) -> int:
        address = len(self.keys)
        self.keys.append(f"1SYN{address:010d}")
        self.balance.append(0)
        self.urn.append(address)
        return address

    def _receiver(self) -> int:
        if not self.keys or self._u() < self.cfg.address_growth:
            return self._new_address()
        if self.cfg.attachment == "preferential":
            return self.urn[self._pick(len(self.urn))]
        return self._pick(len(self.keys))

    def _refresh(self, address: int) -> None:
        at = self._funded_at.get(address)
        if self.balance[address] >= MIN_SPENDABLE:
            if at is None:
                self._funded_at[address] = len(self.funded)
                self.funded.append(address)
        elif at is not None:
            last = self.funded.pop()
            if last != address:
                self.funded[at] = last
                self._funded_at[last] = at
            del self._funded_at[address]

    def _move(self, address: int, delta: int) -> None:
        self.balance[address] += delta
        self._refresh(address)

    def _record(self, coinbase: bool, src, dst, value: int, ts: datetime) -> TransactionRecord:
        return TransactionRecord(
            block_number=self.height,
            transaction_id=str(self.tx_count),
            is_coinbase=coinbase,
            input_address=None if src is None else self.keys[src],
            output_address=None if dst is None else self.keys[dst],
            value=value,
            timestamp=ts,
        )

    def _coinbase(self, reward: int, ts: datetime) -> Iterator[TransactionRecord]:
        miner = self._receiver()
        yield self._record(True, None, miner, reward, ts)
        self.tx_count += 1
        self._move(miner, reward)
        self.urn.append(miner)
        self.issued += reward

    def _spend(self, ts: datetime) -> Iterator[TransactionRecord]:
        if not self.funded:
            raise InfeasibleConfigError(
                f"no funded address at block {self.height}: spends exceed issuance"
            )
        if self._u() < self.cfg.dust_fraction:
            sender = self.funded[self._pick(len(self.funded))]
            amount = DUST_MIN + self._pick(DUST_MAX - DUST_MIN)
            receiver = self._receiver()
            inputs = [(sender, amount)]
            outputs = [(receiver, amount)]
            paid = [receiver]
        else:
            n_inputs = 1 + (self._u() < 0.3) + (self._u() < 0.1)
            senders: List[int] = []
            for _ in range(n_inputs):
                candidate = self.funded[self._pick(len(self.funded))]
                if candidate not in senders:
                    senders.append(candidate)
            inputs = [(a, max(1, int(self.balance[a] * (0.1 + 0.5 * self._u())))) for a in senders]
            t_in = sum(v for _, v in inputs)
            fee = int(t_in * self.cfg.fee_rate)
            t_out = t_in - fee

            paid = [self._receiver() for _ in range(1 + (self._u() < 0.5))]
            weights = [1 + int(self._u() * 1_000_000) for _ in paid]
            change = int(t_out * (0.2 + 0.6 * self._u())) if self._u() < 0.5 else 0
            shares = allocate_largest_remainder(t_out - change, weights, list(range(len(paid))))
            outputs = [(a, v) for a, v in zip(paid, shares) if v > 0]
            if change:
                outputs.append((senders[0], change))
            self.fees += fee

        for address, amount in inputs:
            yield self._record(False, address, None, amount, ts)
        for address, amount in outputs:
            yield self._record(False, inputs[0][0], address, amount, ts)
        self.tx_count += 1

        for address, amount in inputs:
            self._move(address, -amount)
        for address, amount in outputs:
            self._move(address, amount)
        self.urn.extend(paid)

    def records(self) -> Iterator[TransactionRecord]:
        cfg = self.cfg
        if cfg.tx_per_year > 0 and cfg.block_reward == 0:
            raise InfeasibleConfigError("transactions requested but the coinbase schedule issues nothing")
        per_block, extra = divmod(cfg.tx_per_year, cfg.blocks_per_year)
        for year in range(cfg.start_year, cfg.start_year + cfg.years):
            start = datetime(year, 1, 1, tzinfo=timezone.utc)
            seconds = int((datetime(year + 1, 1, 1, tzinfo=timezone.utc) - start).total_seconds())
            for block in range(cfg.blocks_per_year):
                ts = start + timedelta(seconds=block * seconds // cfg.blocks_per_year)
                reward = cfg.block_reward >> (self.height // cfg.halving_interval)
                if reward:
                    yield from self._coinbase(reward, ts)
                for _ in range(per_block + (1 if block < extra else 0)):
                    yield from self._spend(ts)
                self.height += 1
            logger.debug("Generated year %d: %d addresses, %d transactions", year, len(self.keys), self.tx_count)


def generate_chain(cfg: SynthConfig) -> Iterator[TransactionRecord]:
    return ChainGenerator(cfg).records()


def write_chain(cfg: SynthConfig, path: str) -> None:
    lines = (serialize_record(r) for r in generate_chain(cfg))
    write_lines(path, _with_header(lines))
    logger.info("Wrote synthetic chain (seed %d, %d years) to %s", cfg.seed, cfg.years, path)


def _with_header(lines):
    yield header_line()
    yield from lines
