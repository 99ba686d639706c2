"""Enumeration caps, overridable through the NORMWALK_MAX_POINTS env var."""
from __future__ import annotations

import os

DEFAULT_MAX_POINTS = 2_000_000


class ResourceCapError(RuntimeError):
    """An enumeration would exceed the configured size cap."""


def max_points() -> int:
    raw = os.environ.get("NORMWALK_MAX_POINTS")
    if raw is None:
        return DEFAULT_MAX_POINTS
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"NORMWALK_MAX_POINTS must be an integer, got {raw!r}") from exc
    if value <= 0:
        raise ValueError("NORMWALK_MAX_POINTS must be positive")
    return value


def guard(size: int, what: str) -> None:
    cap = max_points()
    if size > cap:
        raise ResourceCapError(f"{what} needs {size} candidates, cap is {cap}")
