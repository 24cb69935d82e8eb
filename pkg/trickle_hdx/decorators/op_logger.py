"""Operation logging decorator.

Wraps a synchronous library operation with:
- start / completed / failed records carrying op_name, status and duration_ms
- a JSON summary of the keyword arguments
- a run id, generated when the caller has not opened a RunContext

Usage:
    @op_logger
    def spectral_profile(X, per_face=False): ...
"""

import json
import time
from functools import wraps
from typing import Any, Callable, Dict, Optional, TypeVar, cast

from trickle_hdx.log_system.correlation import clear_run_id, get_run_id, set_run_id
from trickle_hdx.log_system.unified_logger import UnifiedLogger

F = TypeVar("F", bound=Callable[..., Any])

SUMMARY_LIMIT = 200


def _summarize(value: Any) -> str:
    text = str(value)
    return text[:SUMMARY_LIMIT] + "..." if len(text) > SUMMARY_LIMIT else text


def _input_summary(kwargs: Dict[str, Any]) -> str:
    try:
        return _summarize(json.dumps(kwargs, default=lambda v: type(v).__name__))
    except (TypeError, ValueError):
        return f"<{len(kwargs)} parameters>"


def op_logger(func: Optional[F] = None, *, level: str = "DEBUG") -> Any:
    """Log timing and outcome of an operation.

    Can be used as ``@op_logger`` or ``@op_logger(level="INFO")``.
    """

    def decorator(f: F) -> F:
        @wraps(f)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            owns_run = get_run_id() is None
            if owns_run:
                set_run_id()

            name = f.__name__
            logger = UnifiedLogger.get_logger(f"op.{name}")
            input_args = _input_summary(kwargs)
            logger.log(
                level,
                f"Starting operation: {name}",
                op_name=name,
                status="running",
                input_args=input_args,
            )

            start_time = time.perf_counter()
            try:
                result = f(*args, **kwargs)
            except Exception as e:
                duration_ms = (time.perf_counter() - start_time) * 1000
                logger.log(
                    level,
                    f"Operation failed: {name}",
                    op_name=name,
                    status="error",
                    duration_ms=duration_ms,
                    error_message=str(e),
                )
                raise
            else:
                duration_ms = (time.perf_counter() - start_time) * 1000
                logger.log(
                    level,
                    f"Operation completed: {name}",
                    op_name=name,
                    status="success",
                    duration_ms=duration_ms,
                    output_summary=_summarize(type(result).__name__),
                )
                return result
            finally:
                if owns_run:
                    clear_run_id()

        return cast(F, wrapper)

    if func is not None:
        return decorator(func)
    return decorator
