"""Requires/ensures enclosures for the Table API.

Requirements are always checked and raise :class:`ContractViolation`.
Guarantees are checked only inside :func:`ensure_mode`, since they are
self-checks of the implementation rather than obligations of the caller.
"""

from __future__ import annotations

import functools
from contextlib import contextmanager
from contextvars import ContextVar
from typing import Callable

from .errors import ContractViolation, EnsureViolation, Kind

_ENSURE_MODE: ContextVar[bool] = ContextVar("ensure_mode", default=False)


@contextmanager
def ensure_mode(enabled: bool = True):
    token = _ENSURE_MODE.set(enabled)
    try:
        yield
    finally:
        _ENSURE_MODE.reset(token)


def ensure_enabled() -> bool:
    return _ENSURE_MODE.get()


def require(cond: bool, kind: Kind, message: str, **details) -> None:
    if not cond:
        raise ContractViolation(kind, message, **details)


def ensures(*checks: Callable[..., str | None]):
    """Attach postconditions to an operation.

    Each check is called as ``check(result, *args, **kwargs)`` and returns
    ``None`` when the guarantee holds, or a description of the breach.
    """

    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            result = fn(*args, **kwargs)
            if _ENSURE_MODE.get():
                for check in checks:
                    problem = check(result, *args, **kwargs)
                    if problem:
                        raise EnsureViolation(f"{fn.__name__}: {problem}", operation=fn.__name__)
            return result

        wrapper.ensures = checks
        return wrapper

    return decorate
