import math
from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional, Tuple

from ..snapshot.builder import YearSnapshot
from ..utils.errors import InsufficientGraphError
from .components import ComponentPartition, connected_components


class Membership(NamedTuple):
    lscc_in: float
    lscc_out: float
    lwcc_in: float
    lwcc_out: float


def top_count(p: float, population: int) -> int:
    """ceil(p * population), evaluated on the decimal value of p."""
    return math.ceil(Fraction(str(p)) * population)


def _degrees(snapshot: YearSnapshot, weighted: bool) -> Tuple[Dict[int, int], Dict[int, int]]:
    zeros = dict.fromkeys(snapshot.sorted_nodes(), 0)
    in_degree, out_degree = dict(zeros), dict(zeros)
    for edge in snapshot.edges:
        weight = edge.w2 if weighted else 1
        in_degree[edge.dst] += weight
        out_degree[edge.src] += weight
    return in_degree, out_degree


def top_nodes(degrees: Dict[int, int], p: float) -> List[int]:
    """The ceil(p|V|) highest-degree nodes, ties to the lower address ID."""
    ranked = sorted(degrees, key=lambda a: (-degrees[a], a))
    return ranked[: top_count(p, len(ranked))]


def top_percent_edge_share(snapshot: YearSnapshot, p: float = 0.01, weighted: bool = True) -> Tuple[float, float]:
    """Fraction of (w2-weighted) in-edges / out-edges held by the top-p receivers / senders."""
    if snapshot.node_count == 0:
        raise InsufficientGraphError(f"top share of the empty {snapshot.year} snapshot")
    in_degree, out_degree = _degrees(snapshot, weighted)
    total = sum(in_degree.values())
    in_share = Fraction(sum(in_degree[a] for a in top_nodes(in_degree, p)), total)
    out_share = Fraction(sum(out_degree[a] for a in top_nodes(out_degree, p)), total)
    return float(in_share), float(out_share)


def top_percent_component_membership(
    snapshot: YearSnapshot,
    p: float = 0.01,
    weighted: bool = True,
    weak: Optional[ComponentPartition] = None,
    strong: Optional[ComponentPartition] = None,
) -> Membership:
    """Share of the top-p in-degree and out-degree nodes inside the LSCC and the LWCC."""
    if snapshot.node_count == 0:
        raise InsufficientGraphError(f"membership on the empty {snapshot.year} snapshot")
    weak = weak or connected_components(snapshot, "weak")
    strong = strong or connected_components(snapshot, "strong")
    lwcc = weak.largest()
    lscc = strong.largest(min_size=2)

    in_degree, out_degree = _degrees(snapshot, weighted)
    top_in = top_nodes(in_degree, p)
    top_out = top_nodes(out_degree, p)

    def share(group: List[int], component) -> float:
        return float(Fraction(sum(1 for a in group if a in component), len(group)))

    return Membership(
        lscc_in=share(top_in, lscc),
        lscc_out=share(top_out, lscc),
        lwcc_in=share(top_in, lwcc),
        lwcc_out=share(top_out, lwcc),
    )
