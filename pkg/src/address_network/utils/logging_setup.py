import logging
import logging.config
import os

import yaml
from dotenv import load_dotenv

LOG_LEVEL_ENV = "ADDRESS_NETWORK_LOG_LEVEL"

_ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), "../../.."))
DEFAULT_LOGGING_CONFIG = os.path.join(_ROOT, "config", "logging_config.yaml")


def configure_logging(config_path: str = DEFAULT_LOGGING_CONFIG) -> None:
    """Apply the YAML logging config, then the level from the environment."""
    load_dotenv(os.path.join(_ROOT, ".env"))
    level = os.getenv(LOG_LEVEL_ENV, "INFO").upper()

    if os.path.exists(config_path):
        with open(config_path, "r", encoding="utf-8") as f:
            config = yaml.safe_load(f) or {}
        if config:
            logging.config.dictConfig(config)
    else:
        logging.basicConfig(
            level=logging.INFO,
            format="%(asctime)s - %(levelname)s - %(message)s",
        )

    try:
        logging.getLogger("address_network").setLevel(level)
    except ValueError:
        logging.getLogger(__name__).warning("Unknown log level %r, keeping INFO", level)
