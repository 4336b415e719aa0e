"""Caller-side wall-clock limits, polled by constructions at state-expansion granularity."""

from __future__ import annotations

import contextvars
import time
from contextlib import contextmanager


class CheckTimeout(RuntimeError):
    pass


_deadline: contextvars.ContextVar[float | None] = contextvars.ContextVar("deadline", default=None)


@contextmanager
def time_limit(seconds: float | None):
    if seconds is None:
        yield
        return
    new = time.monotonic() + seconds
    old = _deadline.get()
    token = _deadline.set(new if old is None else min(old, new))
    try:
        yield
    finally:
        _deadline.reset(token)


def checkpoint() -> None:
    d = _deadline.get()
    if d is not None and time.monotonic() > d:
        raise CheckTimeout("time limit exceeded")
