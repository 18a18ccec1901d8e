from .network_schemas import RunConfig, SynthConfig, MetricRow, YearRange

__all__ = ["RunConfig", "SynthConfig", "MetricRow", "YearRange"]
