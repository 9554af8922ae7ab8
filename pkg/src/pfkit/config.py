"""Size caps shared by every module.

Caps are read from the ``PFKIT_CAPS`` environment variable (``key=value``
pairs separated by commas) and can be overridden for a block of code with
:func:`caps_override`.
"""

from __future__ import annotations

import contextlib
import contextvars
import dataclasses
import os
from dataclasses import dataclass


@dataclass(frozen=True)
class Caps:
    rays: int = 200_000
    vertices: int = 100_000
    oracle_vertices: int = 16
    parity_n: int = 8
    parity_ef_n: int = 10
    stab_vertices: int = 16
    tsp_vertices: int = 10


class CapExceeded(ValueError):
    """An input is larger than the configured desk-scale limit."""


def caps_from_env(env: dict[str, str] | None = None) -> Caps:
    env = os.environ if env is None else env
    raw = env.get("PFKIT_CAPS", "").strip()
    if not raw:
        return Caps()
    fields = {f.name for f in dataclasses.fields(Caps)}
    values = {}
    for item in raw.split(","):
        key, _, value = item.partition("=")
        key = key.strip().replace("-", "_")
        if key not in fields:
            raise ValueError(f"unknown cap {key!r} in PFKIT_CAPS")
        values[key] = int(value)
    return Caps(**values)


_current: contextvars.ContextVar[Caps | None] = contextvars.ContextVar("pfkit_caps", default=None)


def get_caps() -> Caps:
    caps = _current.get()
    return caps_from_env() if caps is None else caps


@contextlib.contextmanager
def caps_override(**changes):
    token = _current.set(dataclasses.replace(get_caps(), **changes))
    try:
        yield get_caps()
    finally:
        _current.reset(token)
