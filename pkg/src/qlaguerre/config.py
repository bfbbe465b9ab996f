"""Size limits for the enumeration routes.

``QLAG_MAX_N`` in the environment replaces every default limit.
"""
from __future__ import annotations

import os

from .errors import LimitExceededError

MATCHING_LIMIT = 8
MOMENT_LIMIT = 8
LAGUERRE_COMBINATORIAL_LIMIT = 6
MARKED_LIMIT = 7

ENV_MAX_N = "QLAG_MAX_N"


def limit(default: int) -> int:
    raw = os.environ.get(ENV_MAX_N)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise LimitExceededError(f"{ENV_MAX_N}={raw!r} is not an integer") from None
    if value < 0:
        raise LimitExceededError(f"{ENV_MAX_N} must be nonnegative, got {value}")
    return value


def check_limit(n: int, default: int, what: str = "n") -> None:
    if n < 0:
        raise ValueError(f"{what} must be nonnegative, got {n}")
    cap = limit(default)
    if n > cap:
        raise LimitExceededError(
            f"{what}={n} exceeds the limit {cap} (set {ENV_MAX_N} to raise it)"
        )
