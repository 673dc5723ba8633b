import logging
from typing import Any, Dict, Optional

import auvdocking.default_config as default_config
from auvdocking.errors import ConfigError

logger = logging.getLogger(__name__)

_RATE_KEYS = ("dynamics_rate_hz", "camera_rate_hz", "trajectory_log_rate_hz")

# Process-wide settings; set_config merges overrides into a copy of DEFAULT_CONFIG
_config: Optional[Dict[str, Any]] = None


def _validate(config: Dict[str, Any]):
    for key in _RATE_KEYS:
        if float(config[key]) <= 0.0:
            raise ConfigError(f"{key} must be positive, got {config[key]}")
    for key in ("camera_rate_hz", "trajectory_log_rate_hz"):
        if config[key] > config["dynamics_rate_hz"]:
            raise ConfigError(f"{key} cannot exceed dynamics_rate_hz ({config['dynamics_rate_hz']})")
    if int(config["bench_workers"]) < 1:
        raise ConfigError("bench_workers must be at least 1")
    if logging.getLevelName(str(config["log_level"]).upper()) not in range(0, 51):
        raise ConfigError(f"Unknown log level {config['log_level']!r}")


def initialize_config():
    """Initialize the configuration with default values."""
    global _config
    if _config is None:
        _config = default_config.DEFAULT_CONFIG.copy()


def set_config(config: Dict[str, Any]):
    """Merge overrides into the current configuration; unknown keys are rejected."""
    global _config
    unknown = sorted(set(config) - set(default_config.DEFAULT_CONFIG))
    if unknown:
        raise ConfigError(f"Unknown config keys: {', '.join(unknown)}")
    merged = (_config or default_config.DEFAULT_CONFIG).copy()
    merged.update(config)
    _validate(merged)
    _config = merged
    logger.debug("Config updated: %s", sorted(config))


def get_config() -> Dict[str, Any]:
    """Get the current configuration."""
    if _config is None:
        initialize_config()
    return _config.copy()


def reset_config():
    """Restore the default configuration."""
    global _config
    _config = None
    initialize_config()


initialize_config()
