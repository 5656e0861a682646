# Licensed under the Apache License, Version 2.0
"""
NOMA power ladder and SINR arithmetic.

Noise power is normalised to 1. The threshold is taken in dB at the edges
and converted to linear here. Levels follow p_k = gamma (gamma + 1)^(L - k),
which is the unique ladder with p_k = gamma (1 + I_k): a replica at level k
facing exactly one replica at each weaker level has SINR gamma.
"""

from __future__ import annotations

import math
from typing import Iterable

from .errors import PowerLadderError
from .models import PowerLadder

# Relative slack on the ">= gamma" test so that exact-equality chains decode
# despite floating-point rounding.
SINR_RTOL = 1e-9


def db_to_linear(value_db: float) -> float:
    return 10.0 ** (value_db / 10.0)


def build_power_ladder(gamma_db: float, num_levels: int) -> PowerLadder:
    """Levels p_1..p_L for a threshold given in dB."""
    if num_levels < 1:
        raise PowerLadderError(f"need at least one power level, got {num_levels}")
    if not math.isfinite(gamma_db):
        raise PowerLadderError(f"gamma_db must be finite, got {gamma_db}")
    gamma = db_to_linear(gamma_db)
    levels = tuple(
        gamma * (gamma + 1.0) ** (num_levels - k) for k in range(1, num_levels + 1)
    )
    return PowerLadder(gamma=gamma, levels=levels)


def sinr(target_power: float, interferer_powers: Iterable[float]) -> float:
    """target / (1 + sum of interferers)."""
    return target_power / (1.0 + math.fsum(interferer_powers))


def sinr_decodable(
    target_power: float, interferer_powers: Iterable[float], gamma: float
) -> bool:
    """The capture rule: SINR >= gamma (within SINR_RTOL)."""
    return sinr(target_power, interferer_powers) >= gamma * (1.0 - SINR_RTOL)
