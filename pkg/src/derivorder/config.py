"""Engine-wide limits.

The caps bound combinatorial blowup with a clear error instead of running
out of memory.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class EngineConfig:
    max_order: int = 64  # largest derivative order k accepted by expansions
    max_power: int = 64  # largest inner exponent p accepted by expansions
    max_symmetrize: int = 10  # largest N for symmetrized residuals
    max_moment: int = 6  # largest |alpha| for moment checks


DEFAULT_CONFIG = EngineConfig()
