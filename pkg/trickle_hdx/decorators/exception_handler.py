"""Exception handling decorator for analysis operations.

Features:
- Automatic exception logging with the full traceback
- Error type and operation name attached to the log record
- Signature preservation
- Re-raise so callers (the CLI in particular) map errors to exit codes

Usage:
    @exception_handler
    def verify(path: str) -> int:
        ...
"""

import traceback
from functools import wraps
from typing import Any, Callable, TypeVar, cast

from trickle_hdx.errors import TrickleError
from trickle_hdx.log_system.unified_logger import UnifiedLogger

F = TypeVar("F", bound=Callable[..., Any])


def exception_handler(func: F) -> F:
    """Log any exception escaping ``func`` and re-raise it.

    Expected errors (subclasses of ``TrickleError``) are logged at WARNING
    without the traceback; anything else is logged at ERROR with it.
    """

    @wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return func(*args, **kwargs)
        except TrickleError as e:
            logger = UnifiedLogger.get_logger(f"op.{func.__name__}")
            logger.warning(
                f"{type(e).__name__} in {func.__name__}: {e}",
                op_name=func.__name__,
                status="error",
                error_message=str(e),
                exception_type=type(e).__name__,
            )
            raise
        except Exception as e:
            logger = UnifiedLogger.get_logger(f"op.{func.__name__}")
            tb_str = traceback.format_exc()
            logger.error(
                f"Exception in {func.__name__}: {tb_str}",
                op_name=func.__name__,
                status="error",
                error_message=str(e),
                exception_type=type(e).__name__,
            )
            raise

    return cast(F, wrapper)
