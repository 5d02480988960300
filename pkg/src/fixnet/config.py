"""
Size caps and run configuration.

Every exhaustive operation in fixnet is bounded by a cap. Caps can be lowered
freely but never raised above the hard maxima below.
"""

import logging
import os
from typing import Dict, List, Optional

from pydantic import BaseModel, Field, model_validator

from .errors import ArgumentError

logger = logging.getLogger(__name__)

FAMILY_ENV_VAR = "FIXNET_MAX_FAMILY"

HARD_MAXIMA: Dict[str, int] = {
    "deg": 16,
    "naive_n": 24,
    "tau_n": 20,
    "cycles": 10**7,
    "enum_deg": 4,
    "family": 10**9,
    "expand": 16,
    "sat_n": 24,
    "cert_n": 8,
}


class Caps(BaseModel):
    """Active size caps."""

    deg: int = 16
    naive_n: int = 24
    tau_n: int = 20
    cycles: int = 10**6
    enum_deg: int = 4
    family: int = 10**8
    expand: int = 16
    sat_n: int = 24
    cert_n: int = 6

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def _within_hard_maxima(self) -> "Caps":
        for name, limit in HARD_MAXIMA.items():
            value = getattr(self, name)
            if value < 0:
                raise ValueError(f"cap {name} must be non-negative, got {value}")
            if value > limit:
                raise ValueError(f"cap {name}={value} exceeds hard maximum {limit}")
        return self

    @classmethod
    def from_env(cls, environ: Optional[Dict[str, str]] = None) -> "Caps":
        """Build caps from defaults plus the FIXNET_MAX_FAMILY override."""
        env = os.environ if environ is None else environ
        raw = env.get(FAMILY_ENV_VAR)
        if raw is None:
            return cls()
        try:
            family = int(raw)
        except ValueError as e:
            raise ArgumentError(f"{FAMILY_ENV_VAR} must be an integer, got {raw!r}") from e
        if family > HARD_MAXIMA["family"]:
            logger.warning(
                f"{FAMILY_ENV_VAR}={family} exceeds hard maximum, clamping to {HARD_MAXIMA['family']}"
            )
            family = HARD_MAXIMA["family"]
        return cls(family=family)

    def override(self, **changes: int) -> "Caps":
        """Return a copy with some caps replaced, validated against hard maxima."""
        try:
            return Caps(**{**self.model_dump(), **changes})
        except ValueError as e:
            raise ArgumentError(str(e)) from e


_active_caps: Optional[Caps] = None


def get_caps() -> Caps:
    """Process-wide caps, initialised from the environment on first use."""
    global _active_caps
    if _active_caps is None:
        _active_caps = Caps.from_env()
    return _active_caps


def set_caps(caps: Optional[Caps]) -> None:
    """Replace the process-wide caps (None resets to environment defaults)."""
    global _active_caps
    _active_caps = caps


def resolve_caps(caps: Optional[Caps]) -> Caps:
    return caps if caps is not None else get_caps()


class RunConfig(BaseModel):
    """Configuration for one CLI invocation."""

    subcommand: str
    inputs: List[str] = Field(default_factory=list)
    caps: Caps = Field(default_factory=Caps.from_env)
    output: Optional[str] = None
    seed: int = 0
    json_output: bool = False
