from .components import (
    ComponentPartition,
    UnionFind,
    check_nesting,
    component_size_gini,
    connected_components,
)
from .concentration import Membership, top_percent_component_membership, top_percent_edge_share
from .degrees import DegreeVector, degree_distribution, degree_vectors
from .inequality import UNDEFINED, Moments, distribution_moments, gini
from .report import MetricsReport
from .structure import average_local_clustering, degree_assortativity, density, density_from_counts

__all__ = [
    "ComponentPartition",
    "UnionFind",
    "check_nesting",
    "component_size_gini",
    "connected_components",
    "Membership",
    "top_percent_component_membership",
    "top_percent_edge_share",
    "DegreeVector",
    "degree_distribution",
    "degree_vectors",
    "UNDEFINED",
    "Moments",
    "distribution_moments",
    "gini",
    "MetricsReport",
    "average_local_clustering",
    "degree_assortativity",
    "density",
    "density_from_counts",
]
