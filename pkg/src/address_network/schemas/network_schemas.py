from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .. import DEFAULT_DUST_THRESHOLD

YearRange = Tuple[int, int]


def parse_year_range(text: str) -> YearRange:
    """'2009-2023' -> (2009, 2023); '2013' -> (2013, 2013)."""
    text = text.strip()
    if "-" in text:
        start, _, end = text.partition("-")
        return int(start), int(end)
    return int(text), int(text)


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    inputs: List[str] = Field(min_length=1)
    years: YearRange
    dust_threshold: int = Field(default=DEFAULT_DUST_THRESHOLD, ge=0)
    no_filter: bool = False
    keep_self_loops: bool = False
    top_k: int = Field(default=10, ge=1)
    top_percent: float = Field(default=0.01, gt=0.0, le=1.0)
    clustering_sample: Optional[int] = Field(default=None, ge=1)
    seed: int = 0
    labels: Optional[str] = None
    out: str
    threads: int = Field(default=1, ge=1)
    partitions: int = Field(default=0, ge=0)
    dictionary: Optional[str] = None
    directed_assortativity: bool = False
    clustering_exclude_low_degree: bool = False
    unweighted_ranking: bool = False
    wealth_unfiltered: bool = False
    wealth_only: bool = False
    write_snapshots: bool = False
    chunk_rows: int = Field(default=200_000, ge=1)

    @field_validator("years", mode="before")
    @classmethod
    def _coerce_years(cls, value):
        if isinstance(value, str):
            return parse_year_range(value)
        return value

    @field_validator("years")
    @classmethod
    def _check_years(cls, value: YearRange) -> YearRange:
        start, end = value
        if end < start:
            raise ValueError(f"empty year range {start}-{end}")
        return value

    @property
    def year_list(self) -> List[int]:
        return list(range(self.years[0], self.years[1] + 1))

    def to_conf_lines(self, exclude: Tuple[str, ...] = ()) -> List[str]:
        """Effective configuration as sorted key=value lines."""
        lines = []
        for key, value in sorted(self.model_dump().items()):
            if value is None or key in exclude:
                continue
            if key == "years":
                value = f"{value[0]}-{value[1]}"
            elif isinstance(value, list):
                value = ",".join(value)
            elif isinstance(value, bool):
                value = "true" if value else "false"
            lines.append(f"{key}={value}")
        return lines


class SynthConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    seed: int = 1
    start_year: int = Field(default=2009, ge=2009)
    years: int = Field(default=15, ge=1)
    tx_per_year: int = Field(default=1000, ge=0)
    blocks_per_year: int = Field(default=50, ge=1)
    address_growth: float = Field(default=0.3, gt=0.0, le=1.0)
    attachment: Literal["uniform", "preferential"] = "preferential"
    dust_fraction: float = Field(default=0.05, ge=0.0, lt=1.0)
    fee_rate: float = Field(default=0.001, ge=0.0, lt=1.0)
    block_reward: int = Field(default=5_000_000_000, ge=0)
    halving_interval: int = Field(default=200, ge=1)


class MetricRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    year: int
    phase: str
    metric: str
    variant: str
    value: Optional[float] = None
