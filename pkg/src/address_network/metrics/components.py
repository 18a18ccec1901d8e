from dataclasses import dataclass, field
from typing import Dict, List, Literal, Tuple

from ..snapshot.builder import YearSnapshot
from ..utils.errors import SnapshotContractError
from .inequality import gini

Mode = Literal["weak", "strong"]


class UnionFind:
    """Union-find over dense indices with path compression and union by size."""

    def __init__(self, size: int):
        self.parents = list(range(size))
        self.sizes = [1] * size
        self.num_components = size

    def find(self, elem: int) -> int:
        root = elem
        while root != self.parents[root]:
            root = self.parents[root]
        # compress the path walked
        while elem != root:
            self.parents[elem], elem = root, self.parents[elem]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.sizes[ra] < self.sizes[rb]:
            ra, rb = rb, ra
        self.parents[rb] = ra
        self.sizes[ra] += self.sizes[rb]
        self.num_components -= 1


def strongly_connected(adjacency: List[List[int]]) -> List[int]:
    """
    Tarjan's algorithm with an explicit work stack; returns a component number
    per vertex. No recursion, so depth is bounded only by memory.
    """
    n = len(adjacency)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    component = [-1] * n
    stack: List[int] = []
    counter = 0
    found = 0

    for root in range(n):
        if index[root] != -1:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        work: List[Tuple[int, int]] = [(root, 0)]
        while work:
            v, i = work[-1]
            neighbours = adjacency[v]
            if i < len(neighbours):
                work[-1] = (v, i + 1)
                w = neighbours[i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue

            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    component[w] = found
                    if w == v:
                        break
                found += 1
    return component


@dataclass(frozen=True)
class ComponentPartition:
    """Component label per address; a label is the smallest address ID in its component."""

    mode: Mode
    assignment: Dict[int, int]
    sizes: List[int] = field(compare=False)

    def members(self) -> Dict[int, List[int]]:
        groups: Dict[int, List[int]] = {}
        for address in sorted(self.assignment):
            groups.setdefault(self.assignment[address], []).append(address)
        return groups

    def largest(self, min_size: int = 1) -> frozenset:
        """Members of the largest component (ties: lowest label), empty if none reaches min_size."""
        best_label, best_size = None, 0
        for label, members in sorted(self.members().items()):
            if len(members) > best_size:
                best_label, best_size = label, len(members)
        if best_label is None or best_size < min_size:
            return frozenset()
        return frozenset(a for a, label in self.assignment.items() if label == best_label)


def _index(snapshot: YearSnapshot):
    nodes = snapshot.sorted_nodes()
    return nodes, {address: i for i, address in enumerate(nodes)}


def _partition(mode: Mode, nodes: List[int], component_of: List[int]) -> ComponentPartition:
    label_of: Dict[int, int] = {}
    assignment = {}
    counts: Dict[int, int] = {}
    for i, address in enumerate(nodes):
        # nodes ascend, so the first address seen is the component minimum
        label = label_of.setdefault(component_of[i], address)
        assignment[address] = label
        counts[label] = counts.get(label, 0) + 1
    sizes = sorted(counts.values(), reverse=True)
    return ComponentPartition(mode, assignment, sizes)


def connected_components(snapshot: YearSnapshot, mode: Mode = "weak") -> ComponentPartition:
    nodes, position = _index(snapshot)
    if mode == "weak":
        forest = UnionFind(len(nodes))
        for edge in snapshot.edges:
            forest.union(position[edge.src], position[edge.dst])
        return _partition(mode, nodes, [forest.find(i) for i in range(len(nodes))])
    if mode == "strong":
        adjacency: List[List[int]] = [[] for _ in nodes]
        for edge in snapshot.edges:
            if edge.src != edge.dst:
                adjacency[position[edge.src]].append(position[edge.dst])
        return _partition(mode, nodes, strongly_connected(adjacency))
    raise ValueError(f"unknown component mode {mode!r}")


def check_nesting(weak: ComponentPartition, strong: ComponentPartition) -> None:
    """Every strong component must sit inside a single weak component."""
    for members in strong.members().values():
        labels = {weak.assignment[a] for a in members}
        if len(labels) != 1:
            raise SnapshotContractError(
                f"strong component {members[0]} spans {len(labels)} weak components"
            )


def component_size_gini(partition: ComponentPartition) -> float:
    return gini(partition.sizes)
