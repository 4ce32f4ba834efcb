"""Default numerical tolerances.

Every routine that takes a ``tol`` argument falls back to the active
:class:`Tolerances` when ``tol`` is None.  Overrides are scoped with
:func:`override` and are local to the current thread/context.
"""
from __future__ import annotations

import contextlib
import contextvars
import dataclasses
import os


@dataclasses.dataclass(frozen=True)
class Tolerances:
    evaluation: float = 1e-12
    integral: float = 1e-10

    def __post_init__(self):
        if not (self.evaluation > 0 and self.integral > 0):
            raise ValueError("tolerances must be positive")


_ACTIVE = contextvars.ContextVar("rotwave_tolerances", default=Tolerances())

THREADS_ENV = "ROTWAVE_THREADS"


def get_tolerances() -> Tolerances:
    return _ACTIVE.get()


@contextlib.contextmanager
def override(**changes):
    token = _ACTIVE.set(dataclasses.replace(_ACTIVE.get(), **changes))
    try:
        yield _ACTIVE.get()
    finally:
        _ACTIVE.reset(token)


def default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)
