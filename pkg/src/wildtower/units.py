"""Global coordinate scale for the integer lattice.

All geometry lives on an integer lattice; one model unit corresponds to
`scale` lattice steps.  The default can be overridden through the
WILDTOWER_SCALE environment variable (a positive integer).
"""
from __future__ import annotations

import os

DEFAULT_SCALE = 1_000_000
ENV_VAR = "WILDTOWER_SCALE"


def default_scale() -> int:
    raw = os.environ.get(ENV_VAR)
    if raw is None:
        return DEFAULT_SCALE
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{ENV_VAR} must be a positive integer, got {raw!r}") from None
    if value <= 0:
        raise ValueError(f"{ENV_VAR} must be a positive integer, got {raw!r}")
    return value
