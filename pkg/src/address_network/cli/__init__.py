from .config import build_run_config, read_conf_file
from .phases import ADAPTATION, EXPLORATION, MATURITY, phase_of_year
from .pipeline import run_pipeline

__all__ = [
    "build_run_config",
    "read_conf_file",
    "ADAPTATION",
    "EXPLORATION",
    "MATURITY",
    "phase_of_year",
    "run_pipeline",
]
