from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Literal, Tuple

from ..snapshot.builder import YearSnapshot

Direction = Literal["in", "out"]
WeightKind = Literal["activity", "value"]


@dataclass(frozen=True)
class DegreeVector:
    direction: Direction
    weight: WeightKind
    entries: Dict[int, int]

    @property
    def name(self) -> str:
        return f"{self.direction}_{self.weight}"

    def values(self):
        """Entries in address order."""
        return [self.entries[a] for a in sorted(self.entries)]

    def total(self) -> int:
        return sum(self.entries.values())


def degree_vectors(snapshot: YearSnapshot) -> Dict[str, DegreeVector]:
    """in/out x activity(w2)/value(w1) weighted degrees; every node gets an entry."""
    zeros = dict.fromkeys(snapshot.sorted_nodes(), 0)
    in_activity, out_activity = dict(zeros), dict(zeros)
    in_value, out_value = dict(zeros), dict(zeros)
    for edge in snapshot.edges:
        in_activity[edge.dst] += edge.w2
        out_activity[edge.src] += edge.w2
        in_value[edge.dst] += edge.w1
        out_value[edge.src] += edge.w1
    vectors = (
        DegreeVector("in", "activity", in_activity),
        DegreeVector("out", "activity", out_activity),
        DegreeVector("in", "value", in_value),
        DegreeVector("out", "value", out_value),
    )
    return {v.name: v for v in vectors}


def degree_distribution(snapshot: YearSnapshot) -> List[Tuple[str, int, int]]:
    """(vector, degree, node count) rows of the four weighted-degree histograms."""
    rows = []
    for name, vector in degree_vectors(snapshot).items():
        counts = Counter(vector.entries.values())
        rows.extend((name, degree, counts[degree]) for degree in sorted(counts))
    return rows
