"""Package defaults and environment lookups."""

import os
from typing import Optional

SCHEMA_VERSION = "hahnfield/1"

SEED_ENV_VAR = "HAHNFIELD_SEED"
DEFAULT_SEED = 0

# Z-window used by the oracles on ProductQZ chains.
DEFAULT_WINDOW_LO = -8
DEFAULT_WINDOW_HI = 8

AXIOM_SAMPLES = 500
DV_SAMPLES = 500
LEIBNIZ_SAMPLES = 500
RESIDUE_SAMPLES = 200

MAX_Q = 12

# Default multiplier lambda for the derivation; must be negative.
DEFAULT_MULTIPLIER = -1


def resolve_seed(explicit: Optional[int] = None) -> int:
    """Returns the explicit seed, else HAHNFIELD_SEED, else the default."""
    if explicit is not None:
        return explicit
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None or raw.strip() == "":
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{SEED_ENV_VAR} must be an integer, got {raw!r}") from None
