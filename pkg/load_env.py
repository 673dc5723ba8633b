"""
Load environment variables from .env file for auvdocking.
Import this module before reading DEFAULT_CONFIG so AUVDOCKING_* overrides apply.
"""
import logging
from pathlib import Path

from dotenv import load_dotenv

logger = logging.getLogger(__name__)


def load_env() -> bool:
    """Load environment variables from .env file."""
    env_path = Path(__file__).parent / ".env"
    loaded = load_dotenv(env_path, override=False)
    if loaded:
        logger.debug("Loaded environment variables from %s", env_path)
    return loaded


# Auto-load when module is imported
load_env()
