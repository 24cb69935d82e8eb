"""Decorators for Trickle HDX operations.

- exception_handler: logs escaping exceptions and re-raises
- op_logger: timing and outcome records with run ids
- parallelize: ordered, fail-fast batch map over keyword-argument dicts
"""

from .exception_handler import exception_handler
from .op_logger import op_logger
from .parallelize import parallelize

__all__ = ["exception_handler", "op_logger", "parallelize"]
