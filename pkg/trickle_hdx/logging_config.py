"""Logging configuration for Trickle HDX"""

import os
from typing import Optional

from trickle_hdx.config import AnalysisConfig, get_platform_info
from trickle_hdx.log_system.unified_logger import UnifiedLogger

VALID_LEVELS = {"TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL"}


def resolve_log_level(config: Optional[AnalysisConfig] = None) -> str:
    """Level from the config, then the LOG_LEVEL environment variable, then INFO."""
    level = "INFO"
    if config is not None and config.log_level:
        level = config.log_level.upper()
    elif os.getenv("LOG_LEVEL"):
        level = os.environ["LOG_LEVEL"].upper()
    return level if level in VALID_LEVELS else "INFO"


def setup_logging(config: Optional[AnalysisConfig] = None, quiet: bool = False) -> None:
    """Configure logging for a Trickle HDX run"""
    if config is None:
        config = AnalysisConfig()
    config.log_level = resolve_log_level(config)

    UnifiedLogger.initialize(config, quiet=quiet)

    log = UnifiedLogger.get_logger("trickle_hdx")
    log.debug(f"Log File: {config.log_file_path if config.log_to_file else 'disabled'}")
    log.debug(f"Log Level: {config.log_level}")
    log.debug(f"Workers: {config.workers}")
    for name, path in get_platform_info().items():
        log.debug(f"{name}: {path}")


logger = UnifiedLogger.get_logger("trickle_hdx")
