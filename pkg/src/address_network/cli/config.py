import io
import logging
from typing import Any, Dict, Optional

from pydantic import ValidationError

from ..schemas.network_schemas import RunConfig
from ..utils.errors import ConfigError

logger = logging.getLogger(__name__)

KEY_ALIASES = {"input": "inputs"}
LIST_KEYS = {"inputs"}


def normalize_key(key: str) -> str:
    key = key.strip().lower().replace("-", "_")
    return KEY_ALIASES.get(key, key)


def read_conf_file(path: str) -> Dict[str, Any]:
    """Parse a key=value run configuration; '#' comments and blank lines are ignored."""
    values: Dict[str, Any] = {}
    with io.open(path, "r", encoding="utf-8") as f:
        for line_number, line in enumerate(f, 1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            key, sep, value = text.partition("=")
            if not sep or not key.strip():
                raise ConfigError(f"{path}: line {line_number}: expected key=value")
            key = normalize_key(key)
            value = value.strip()
            if key in values:
                raise ConfigError(f"{path}: line {line_number}: duplicate key {key!r}")
            if key in LIST_KEYS:
                value = [item.strip() for item in value.split(",") if item.strip()]
            elif value == "":
                continue
            values[key] = value
    logger.debug("Read %d settings from %s", len(values), path)
    return values


def build_run_config(file_path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """File values first, then non-None command-line overrides."""
    values: Dict[str, Any] = read_conf_file(file_path) if file_path else {}
    for key, value in (overrides or {}).items():
        if value is not None:
            values[normalize_key(key)] = value
    try:
        return RunConfig(**values)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}" for err in e.errors()
        )
        raise ConfigError(f"invalid run configuration: {problems}") from e
