"""
Utility functions and helpers for the workbench.
"""
import logging
import time
from functools import wraps
from typing import Any, Callable

def timer(func: Callable) -> Callable:
    """Decorator to time function execution."""
    @wraps(func)
    async def async_wrapper(*args, **kwargs):
        start_time = time.time()
        result = await func(*args, **kwargs)
        end_time = time.time()
        logging.info(f"{func.__name__} took {end_time - start_time:.2f} seconds")
        return result

    @wraps(func)
    def sync_wrapper(*args, **kwargs):
        start_time = time.time()
        result = func(*args, **kwargs)
        end_time = time.time()
        logging.info(f"{func.__name__} took {end_time - start_time:.2f} seconds")
        return result

    return async_wrapper if hasattr(func, '__code__') and func.__code__.co_flags & 0x80 else sync_wrapper

class WorkbenchException(Exception):
    """Base exception for workbench errors."""
    def __init__(self, message: str, status_code: int = 500):
        self.message = message
        self.status_code = status_code
        super().__init__(self.message)

class ValidationError(WorkbenchException):
    """Malformed input: unknown symbols, bad exponents, ragged matrices."""
    def __init__(self, message: str):
        super().__init__(message, 422)

class NotFoundError(WorkbenchException):
    """Exception for unknown fixtures."""
    def __init__(self, message: str):
        super().__init__(message, 404)

class PreconditionError(WorkbenchException):
    """An operation's precondition does not hold; the message names it."""
    def __init__(self, message: str):
        super().__init__(message, 422)

class BudgetExceededError(WorkbenchException):
    """A bounded search ran out of budget where no verdict value is available."""
    def __init__(self, message: str):
        super().__init__(message, 409)

class ConsistencyError(WorkbenchException):
    """An internal cross-check failed."""
    def __init__(self, message: str):
        super().__init__(message, 500)

def jsonable(value: Any) -> Any:
    """Convert tuples, sets and sympy integers into plain JSON-friendly values."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted(jsonable(v) for v in value)
    if isinstance(value, bool) or value is None or isinstance(value, (str, float)):
        return value
    try:
        return int(value)
    except (TypeError, ValueError):
        return str(value)
