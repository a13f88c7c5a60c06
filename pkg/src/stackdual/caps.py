"""Resource caps: maximum term counts and per-command deadlines.

The kernels poll these at cheap points so a runaway Groebner computation
fails fast instead of hanging a session.  Caps are off by default; the CLI
installs them around each command.  Overridable through the environment
variables STACKDUAL_MAX_TERMS and STACKDUAL_TIME_LIMIT_S.
"""

from __future__ import annotations

import os
import time
from contextlib import contextmanager

DEFAULT_MAX_TERMS = 100_000
DEFAULT_TIME_LIMIT_S = 60.0

_max_terms: int | None = None
_deadline: float | None = None


class ResourceCapError(RuntimeError):
    """A configured resource cap was exceeded."""


def env_max_terms() -> int:
    return int(os.environ.get("STACKDUAL_MAX_TERMS", DEFAULT_MAX_TERMS))


def env_time_limit() -> float:
    return float(os.environ.get("STACKDUAL_TIME_LIMIT_S", DEFAULT_TIME_LIMIT_S))


@contextmanager
def command_caps(max_terms: int | None = None, time_limit: float | None = None):
    """Install caps for the duration of one command."""
    global _max_terms, _deadline
    old = (_max_terms, _deadline)
    _max_terms = max_terms if max_terms is not None else env_max_terms()
    limit = time_limit if time_limit is not None else env_time_limit()
    _deadline = time.monotonic() + limit
    try:
        yield
    finally:
        _max_terms, _deadline = old


def check_term_cap(nterms: int) -> None:
    if _max_terms is not None and nterms > _max_terms:
        raise ResourceCapError(f"polynomial exceeds {_max_terms} terms")


_tick = 0


def check_deadline() -> None:
    # called from inner loops; only touch the clock now and then
    global _tick
    _tick += 1
    if _tick & 63:
        return
    if _deadline is not None and time.monotonic() > _deadline:
        raise ResourceCapError("command wall-clock limit exceeded")
