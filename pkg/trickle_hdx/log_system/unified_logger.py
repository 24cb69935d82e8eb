"""
Unified logging factory with Loguru integration.

This module provides a factory for run-aware loggers that write to stderr and
to a rotating log file, while intercepting standard Python logging. The
package logger is disabled on import; nothing is emitted until
``UnifiedLogger.initialize`` runs (the CLI does this on startup).
"""

import inspect
import logging
import sys
from typing import TYPE_CHECKING, Any, Dict, Optional

from loguru import logger

from .correlation import get_run_id

if TYPE_CHECKING:
    from loguru import Logger, Record

    from trickle_hdx.config import AnalysisConfig

PACKAGE = "trickle_hdx"

STDERR_FORMAT = (
    "<green>{time:HH:mm:ss.SSS}</green> | <level>{level: <8}</level> | "
    "<cyan>{extra[logger_name]}</cyan> | {extra[run_id]} | {message}"
)

FILE_FORMAT = (
    "{time:YYYY-MM-DD HH:mm:ss.SSS} | {level: <8} | {extra[logger_name]} | "
    "{extra[run_id]} | {extra[op_name]} | {extra[status]} | "
    "{extra[duration_ms]} | {message}"
)


def _patch_record(record: "Record") -> None:
    """Fill the extra fields every sink format expects."""
    extra = record["extra"]
    extra["run_id"] = extra.get("run_id") or get_run_id() or "-"
    extra.setdefault("logger_name", record["name"] or PACKAGE)
    extra.setdefault("op_name", "-")
    extra.setdefault("status", "-")
    duration = extra.get("duration_ms")
    extra["duration_ms"] = f"{duration:.3f}" if isinstance(duration, float) else "-"


class UnifiedLogger:
    """Factory for run-aware loggers."""

    _initialized: bool = False
    _handler_ids: Dict[str, int] = {}

    @classmethod
    def initialize(cls, config: "AnalysisConfig", quiet: bool = False) -> None:
        """Initialize the logging sinks from an analysis configuration.

        Args:
            config: Configuration supplying level, log file path and retention
            quiet: Suppress the stderr sink (the file sink is kept)
        """
        logger.remove()
        cls._handler_ids = {}
        logger.configure(patcher=_patch_record)

        level = config.log_level.upper()
        if not quiet:
            cls._handler_ids["stderr"] = logger.add(
                sys.stderr, level=level, format=STDERR_FORMAT, colorize=False
            )

        if config.log_to_file and config.log_file_path is not None:
            try:
                config.log_file_path.parent.mkdir(parents=True, exist_ok=True)
                cls._handler_ids["file"] = logger.add(
                    str(config.log_file_path),
                    level="DEBUG",
                    format=FILE_FORMAT,
                    rotation="10 MB",
                    retention=f"{config.log_retention_days} days",
                    enqueue=True,
                    encoding="utf-8",
                )
            except OSError as e:
                print(f"Warning: Could not open log file: {e}", file=sys.stderr)

        # Configure standard library logging to use Loguru
        logging.basicConfig(
            handlers=[InterceptHandler()], level=logging.INFO, force=True
        )
        logging.getLogger().handlers = [InterceptHandler()]

        logger.enable(PACKAGE)
        cls._initialized = True

    @classmethod
    def get_logger(cls, name: Optional[str] = None) -> "Logger":
        """Get a run-aware logger instance.

        Args:
            name: Optional logger name for identification

        Returns:
            A Loguru logger bound with the current run id and name
        """
        bindings: Dict[str, Any] = {"run_id": get_run_id()}
        if name:
            bindings["logger_name"] = name
        return logger.bind(**bindings)

    @classmethod
    def is_initialized(cls) -> bool:
        return cls._initialized

    @classmethod
    def close(cls) -> None:
        """Flush and remove every sink; the package goes silent again."""
        logger.complete()
        logger.remove()
        cls._handler_ids = {}
        cls._initialized = False
        logger.disable(PACKAGE)


class InterceptHandler(logging.Handler):
    """Intercept standard library logging and route to Loguru.

    Warnings from numpy/scipy that go through ``logging`` end up in the same
    sinks as the package's own records.
    """

    def emit(self, record: logging.LogRecord) -> None:
        """Emit a log record by forwarding to Loguru."""
        try:
            level: Any = logger.level(record.levelname).name
        except ValueError:
            level = record.levelno

        # Find caller from where originated the logged message
        frame, depth = inspect.currentframe(), 0
        while frame and (depth == 0 or frame.f_code.co_filename == logging.__file__):
            frame = frame.f_back
            depth += 1

        logger.opt(depth=depth, exception=record.exc_info).log(
            level, record.getMessage()
        )
