from typing import Optional, Tuple

import networkx as nx
import numpy as np

from ..snapshot.builder import YearSnapshot
from ..utils.errors import InsufficientGraphError
from .inequality import UNDEFINED


def density_from_counts(nodes: int, edges: int) -> float:
    if nodes < 2:
        raise InsufficientGraphError(f"density needs at least two nodes, got {nodes}")
    return edges / (nodes * (nodes - 1))


def density(snapshot: YearSnapshot) -> float:
    """|E| / (|V| (|V| - 1)) over distinct directed pairs, loops excluded."""
    edges = sum(1 for e in snapshot.edges if e.src != e.dst)
    return density_from_counts(snapshot.node_count, edges)


def simple_graph(snapshot: YearSnapshot) -> nx.Graph:
    """Undirected simplification: loops and directions dropped, every node kept."""
    graph = nx.Graph()
    graph.add_nodes_from(snapshot.sorted_nodes())
    graph.add_edges_from((e.src, e.dst) for e in snapshot.edges if e.src != e.dst)
    return graph


def simple_digraph(snapshot: YearSnapshot) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_edges_from((e.src, e.dst) for e in snapshot.edges if e.src != e.dst)
    return graph


def _constant(values) -> bool:
    first = next(values, None)
    return all(v == first for v in values)


def degree_assortativity(snapshot: YearSnapshot, directed: bool = False) -> float:
    """
    Pearson correlation of endpoint degrees.

    Default: total degree on the undirected simplification, each edge counted
    in both orientations. `directed`: source out-degree against target
    in-degree on the simple digraph. Zero variance returns the NaN sentinel.
    """
    if directed:
        graph = simple_digraph(snapshot)
        if graph.number_of_edges() < 2:
            raise InsufficientGraphError("assortativity needs at least two edges")
        out_degree = graph.out_degree()
        in_degree = graph.in_degree()
        if _constant(out_degree[u] for u, _ in graph.edges()) or _constant(in_degree[v] for _, v in graph.edges()):
            return UNDEFINED
        return float(nx.degree_assortativity_coefficient(graph, x="out", y="in"))

    graph = simple_graph(snapshot)
    if graph.number_of_edges() < 2:
        raise InsufficientGraphError("assortativity needs at least two edges")
    degree = graph.degree()
    if _constant(degree[u] for edge in graph.edges() for u in edge):
        return UNDEFINED
    return float(nx.degree_assortativity_coefficient(graph))


def average_local_clustering(
    snapshot: YearSnapshot,
    sample: Optional[Tuple[int, int]] = None,
    exclude_low_degree: bool = False,
) -> float:
    """
    Mean local clustering on the undirected simplification. Degree < 2 nodes
    count as 0 unless `exclude_low_degree`. `sample` = (size, seed) averages
    over a uniform node sample instead of every node.
    """
    nodes = snapshot.sorted_nodes()
    if not nodes:
        raise InsufficientGraphError(f"clustering of the empty {snapshot.year} snapshot")
    graph = simple_graph(snapshot)
    if sample is not None and sample[0] < len(nodes):
        size, seed = sample
        rng = np.random.default_rng(seed)
        picked = np.sort(rng.choice(len(nodes), size=size, replace=False))
        nodes = [nodes[i] for i in picked]
    if exclude_low_degree:
        nodes = [n for n in nodes if graph.degree(n) >= 2]
    if not nodes:
        return UNDEFINED
    return float(nx.average_clustering(graph, nodes=nodes))
