from .labels import LabeledMember, label_rich_sets, read_labels
from .ledgers import WealthLedgers
from .rich_sets import RichSet, richness_ratio, top_k, union_growth

__all__ = [
    "LabeledMember",
    "label_rich_sets",
    "read_labels",
    "WealthLedgers",
    "RichSet",
    "richness_ratio",
    "top_k",
    "union_growth",
]
