"""
Run id management for log correlation.

Every CLI invocation (and every decorated library operation called outside
one) gets a run id so that the log lines of a sweep can be grouped. The id
lives in a ContextVar, which keeps it isolated per thread and per context.
"""

import uuid
from contextvars import ContextVar
from types import TracebackType
from typing import Optional, Type

run_id_var: ContextVar[Optional[str]] = ContextVar("run_id", default=None)


def generate_run_id() -> str:
    """Generate a unique run id of the form 'run_xxxxxxxxxxxx'."""
    return f"run_{uuid.uuid4().hex[:12]}"


def set_run_id(run_id: Optional[str] = None) -> str:
    """Set the run id for the current context, generating one if needed."""
    if run_id is None:
        run_id = generate_run_id()
    run_id_var.set(run_id)
    return run_id


def get_run_id() -> Optional[str]:
    """Get the current run id, or None outside of a run."""
    return run_id_var.get()


def clear_run_id() -> None:
    """Clear the run id from the current context."""
    run_id_var.set(None)


class RunContext:
    """Context manager for run id scope.

    Example:
        with RunContext() as run_id:
            profile = spectral_profile(X)
    """

    def __init__(self, run_id: Optional[str] = None, clear_on_exit: bool = True):
        self.run_id = run_id
        self.clear_on_exit = clear_on_exit
        self._previous_id: Optional[str] = None

    def __enter__(self) -> str:
        self._previous_id = run_id_var.get()
        return set_run_id(self.run_id)

    def __exit__(
        self,
        exc_type: Optional[Type[BaseException]],
        exc_val: Optional[BaseException],
        exc_tb: Optional[TracebackType],
    ) -> None:
        if self.clear_on_exit and self._previous_id is None:
            clear_run_id()
        else:
            run_id_var.set(self._previous_id)
