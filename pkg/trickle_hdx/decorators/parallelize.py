"""Parallelization decorator for per-face and per-pair sweeps.

Transforms ``func(**kwargs) -> R`` into ``func(kwargs_list, workers=1) -> List[R]``:
- results come back in the order of ``kwargs_list``
- every item is bound against the original signature before anything runs
- fail-fast: the first failing item (in input order) aborts the batch
- ``workers > 1`` runs the items on a thread pool; numpy releases the GIL in
  the eigensolvers, which is where the time goes

Usage:
    @parallelize
    def face_lambda2(face: Face) -> float: ...

    values = face_lambda2([{"face": f} for f in faces], workers=4)
"""

import inspect
from concurrent.futures import ThreadPoolExecutor
from functools import wraps
from typing import Any, Callable, Dict, List

from trickle_hdx.log_system.unified_logger import UnifiedLogger

logger = UnifiedLogger.get_logger(__name__)


def _build_parallelized_docstring(func: Callable[..., Any]) -> str:
    """Constructs the docstring for the parallelized wrapper function."""
    original_doc = (
        func.__doc__.strip() if func.__doc__ else "No original docstring provided."
    )
    func_name = func.__name__

    sig = inspect.signature(func)
    params = []
    for name, param in sig.parameters.items():
        if param.annotation != inspect.Parameter.empty:
            params.append(f"{name}: {param.annotation}")
        else:
            params.append(name)
    params_str = ", ".join(params)

    return f"""Parallelized version of `{func_name}`.

Original function signature: {func_name}({params_str})

Args:
    kwargs_list (List[Dict[str, Any]]): one dictionary of keyword arguments
        per call to `{func_name}`.
    workers (int): thread count; 1 runs sequentially in the calling thread.

Returns:
    List[Any]: the results of each call, in the order of `kwargs_list`.

Original docstring:
{original_doc}
"""


def parallelize(func: Callable[..., Any]) -> Callable[..., List[Any]]:
    """Decorator turning a single-item function into an ordered batch map.

    Raises:
        TypeError: If kwargs_list is not a list of dicts or an item does not
            bind to the original signature
        Exception: The exception of the first failing item (fail-fast)
    """
    original_signature = inspect.signature(func)

    @wraps(func)
    def wrapper(kwargs_list: List[Dict[str, Any]], workers: int = 1) -> List[Any]:
        if not isinstance(kwargs_list, list):
            raise TypeError("Parallel operations require a List[Dict] parameter")

        if not kwargs_list:
            return []

        for i, kwargs in enumerate(kwargs_list):
            if not isinstance(kwargs, dict):
                raise TypeError(
                    f"Item {i} in kwargs_list must be a dict, "
                    f"got {type(kwargs).__name__}"
                )
            original_signature.bind(**kwargs)

        if workers <= 1 or len(kwargs_list) == 1:
            return [func(**kwargs) for kwargs in kwargs_list]

        logger.debug(
            f"Parallel execution of {func.__name__} with {len(kwargs_list)} items "
            f"on {workers} workers"
        )
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(func, **kwargs) for kwargs in kwargs_list]
            try:
                return [future.result() for future in futures]
            except BaseException:
                for future in futures:
                    future.cancel()
                raise

    wrapper.__doc__ = _build_parallelized_docstring(func)
    wrapper.__signature__ = inspect.Signature(  # type: ignore[attr-defined]
        parameters=[
            inspect.Parameter(
                "kwargs_list",
                inspect.Parameter.POSITIONAL_OR_KEYWORD,
                annotation=List[Dict[str, Any]],
            ),
            inspect.Parameter(
                "workers",
                inspect.Parameter.POSITIONAL_OR_KEYWORD,
                default=1,
                annotation=int,
            ),
        ],
        return_annotation=List[Any],
    )
    wrapper.__annotations__ = {
        "kwargs_list": List[Dict[str, Any]],
        "workers": int,
        "return": List[Any],
    }
    return wrapper
