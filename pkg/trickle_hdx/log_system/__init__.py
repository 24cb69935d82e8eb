"""Run-aware logging for Trickle HDX."""

from typing import TYPE_CHECKING

from .correlation import (
    RunContext,
    clear_run_id,
    generate_run_id,
    get_run_id,
    set_run_id,
)
from .unified_logger import InterceptHandler, UnifiedLogger

if TYPE_CHECKING:
    from loguru import Logger


def get_op_logger(op_name: str) -> "Logger":
    """Get a logger bound to a library operation name."""
    return UnifiedLogger.get_logger(f"op.{op_name}").bind(op_name=op_name)


__all__ = [
    "RunContext",
    "clear_run_id",
    "generate_run_id",
    "get_run_id",
    "set_run_id",
    "InterceptHandler",
    "UnifiedLogger",
    "get_op_logger",
]
