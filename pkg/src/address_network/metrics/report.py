import json
import math
from typing import Dict, List, Optional

import pandas as pd

from ..schemas.network_schemas import MetricRow

COLUMNS = ["year", "phase", "metric", "variant", "value"]


class MetricsReport:
    """Per-year statistics, one row per (year, metric, variant)."""

    def __init__(self):
        self.rows: List[MetricRow] = []

    def add(self, year: int, phase: str, metric: str, variant: str, value: Optional[float]) -> None:
        if value is not None and math.isnan(value):
            value = None
        self.rows.append(MetricRow(year=year, phase=phase, metric=metric, variant=variant, value=value))

    def extend(self, other: "MetricsReport") -> None:
        self.rows.extend(other.rows)

    def value(self, year: int, metric: str, variant: str = "") -> Optional[float]:
        for row in self.rows:
            if (row.year, row.metric, row.variant) == (year, metric, variant):
                return row.value
        raise KeyError((year, metric, variant))

    def years(self) -> List[int]:
        return sorted({row.year for row in self.rows})

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame([row.model_dump() for row in self.rows], columns=COLUMNS)
        return frame.sort_values(["year", "metric", "variant"], kind="mergesort").reset_index(drop=True)

    def write_csv(self, path: str) -> None:
        self.to_frame().to_csv(path, index=False, na_rep="NA", float_format="%.12g", lineterminator="\n")

    def to_document(self) -> Dict[str, Dict]:
        document: Dict[str, Dict] = {}
        for row in self.rows:
            entry = document.setdefault(str(row.year), {"phase": row.phase, "metrics": {}})
            entry["metrics"].setdefault(row.metric, {})[row.variant or "value"] = row.value
        return document

    def write_json(self, path: str) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            json.dump(self.to_document(), f, indent=2, sort_keys=True)
            f.write("\n")
