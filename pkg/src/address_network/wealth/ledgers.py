import io
import logging
from typing import Dict, Iterable, Literal, Optional

from ..flow.types import CoinbaseCredit
from ..snapshot.builder import AggregatedEdge
from ..utils.errors import LedgerError

logger = logging.getLogger(__name__)

Kind = Literal["balance", "indegree"]


class WealthLedgers:
    """
    Cumulative balance and in-degree per address.

    Each year adds received w1, subtracts sent w1 and fees paid, and credits
    coinbase rewards; in-degree adds received w2 plus one per coinbase credit.
    Balances carry over in the running maps.
    """

    def __init__(self):
        self.balance: Dict[int, int] = {}
        self.indegree: Dict[int, int] = {}
        self.fees_paid: Dict[int, Dict[int, int]] = {}
        self.coinbase_received: Dict[int, Dict[int, int]] = {}
        self.year: Optional[int] = None
        self.issued = 0
        self.fees = 0

    def __len__(self) -> int:
        return len(self.balance)

    def _touch(self, address: int) -> None:
        if address not in self.balance:
            self.balance[address] = 0
            self.indegree[address] = 0

    def advance_year(
        self,
        year: int,
        edges: Iterable[AggregatedEdge],
        fees: Dict[int, int],
        credits: Iterable[CoinbaseCredit],
    ) -> "WealthLedgers":
        if self.year is not None and year != self.year + 1:
            raise LedgerError(f"ledger is at {self.year}; cannot advance to {year}")

        for edge in edges:
            self._touch(edge.src)
            self._touch(edge.dst)
            self.balance[edge.dst] += edge.w1
            self.balance[edge.src] -= edge.w1
            self.indegree[edge.dst] += edge.w2

        alpha: Dict[int, int] = {}
        for address in sorted(fees):
            fee = fees[address]
            self._touch(address)
            self.balance[address] -= fee
            alpha[address] = fee
            self.fees += fee

        beta: Dict[int, int] = {}
        for credit in credits:
            self._touch(credit.dst)
            self.balance[credit.dst] += credit.value
            self.indegree[credit.dst] += 1
            beta[credit.dst] = beta.get(credit.dst, 0) + credit.value
            self.issued += credit.value

        self.fees_paid[year] = alpha
        self.coinbase_received[year] = beta
        self.year = year
        self.check_total()
        logger.debug(
            "Ledger %d: %d addresses, %d negative balances",
            year,
            len(self.balance),
            self.negative_balance_count,
        )
        return self

    def check_total(self) -> None:
        total = sum(self.balance.values())
        if total != self.issued - self.fees:
            raise LedgerError(
                f"ledger total {total} differs from issued {self.issued} minus fees {self.fees}"
            )

    @property
    def negative_balance_count(self) -> int:
        return sum(1 for value in self.balance.values() if value < 0)

    def values(self, kind: Kind) -> Dict[int, int]:
        if kind == "balance":
            return self.balance
        if kind == "indegree":
            return self.indegree
        raise ValueError(f"unknown ledger kind {kind!r}")

    def write_checkpoint(self, path: str) -> None:
        """Sorted 'address_id,balance_quanta,indegree' rows."""
        with io.open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write("address_id,balance_quanta,indegree\n")
            balance, indegree = self.balance, self.indegree
            f.write("".join(f"{a},{balance[a]},{indegree[a]}\n" for a in sorted(balance)))
