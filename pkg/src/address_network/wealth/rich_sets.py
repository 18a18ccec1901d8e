import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from ..utils.errors import DegenerateDistributionError, LedgerError
from .ledgers import Kind, WealthLedgers


@dataclass(frozen=True)
class RichSet:
    year: int
    kind: Kind
    members: Tuple[Tuple[int, int], ...]  # (address, value), value desc then address asc

    @property
    def addresses(self) -> frozenset:
        return frozenset(address for address, _ in self.members)


def top_k(ledgers: WealthLedgers, kind: Kind, k: int = 10) -> RichSet:
    values = ledgers.values(kind)
    if not values:
        raise LedgerError("top-k of an empty ledger")
    # only values at or above the k-th largest can rank
    cutoff = heapq.nlargest(k, values.values())[-1]
    candidates = [item for item in values.items() if item[1] >= cutoff]
    ranked = sorted(candidates, key=lambda item: (-item[1], item[0]))
    return RichSet(ledgers.year, kind, tuple(ranked[:k]))


def richness_ratio(ledgers: WealthLedgers, kind: Kind, k: int = 10, rich: Optional[RichSet] = None) -> float:
    """(mean of the top-k values) / (mean over every ledger address)."""
    values = ledgers.values(kind)
    total = sum(values.values())
    if total <= 0:
        raise DegenerateDistributionError(f"{kind} total is {total}; ratio undefined")
    rich = rich or top_k(ledgers, kind, k)
    top_total = sum(value for _, value in rich.members)
    return float(Fraction(top_total * len(values), len(rich.members) * total))


def union_growth(sets: Sequence[RichSet]) -> List[int]:
    """|union of the first t rich sets| for t = 1..len(sets)."""
    seen = set()
    series = []
    for rich in sets:
        seen |= rich.addresses
        series.append(len(seen))
    return series
