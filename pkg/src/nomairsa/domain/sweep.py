# Licensed under the Apache License, Version 2.0
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .errors import ConfigurationError
from .models import StoppingRule


def users_for_load(load: float, slots: int) -> int:
    """m = round(G * n), halves rounded up."""
    return int(math.floor(load * slots + 0.5))


@dataclass(frozen=True)
class GridPoint:
    load: float
    n: int
    m: int


@dataclass(frozen=True)
class SweepSpec:
    """
    One parameter study: either a load grid at fixed n, or an n grid at a
    fixed load (`slot_grid` set).
    """

    slots: int
    levels: int
    gamma_db: float
    dist: str
    loads: tuple[float, ...]
    stop: StoppingRule
    seed: int
    out: Path
    slot_grid: Optional[tuple[int, ...]] = None
    load: float = 0.8
    s1_baseline: bool = True
    census: bool = False
    workers: int = 1
    batch_frames: int = 1000

    def __post_init__(self) -> None:
        if self.levels < 1:
            raise ConfigurationError(f"--levels must be >= 1, got {self.levels}")
        if not math.isfinite(self.gamma_db):
            raise ConfigurationError("--gamma-db must be finite")
        if self.workers < 1:
            raise ConfigurationError("--workers must be >= 1")
        if self.batch_frames < 1:
            raise ConfigurationError("--batch-frames must be >= 1")
        if self.slot_grid is not None:
            if not self.slot_grid:
                raise ConfigurationError("slot grid is empty")
            if self.load <= 0:
                raise ConfigurationError(f"load must be > 0, got {self.load}")
            for n in self.slot_grid:
                if n < 1:
                    raise ConfigurationError(f"slot count must be positive, got {n}")
        else:
            if not self.loads:
                raise ConfigurationError("load grid is empty")
            if self.slots < 1:
                raise ConfigurationError(f"--slots must be positive, got {self.slots}")
        for point in self.grid():
            if point.load <= 0:
                raise ConfigurationError(f"loads must be > 0, got {point.load}")
            if point.m < 1:
                raise ConfigurationError(
                    f"G={point.load} with n={point.n} rounds to m={point.m} users"
                )

    def grid(self) -> list[GridPoint]:
        if self.slot_grid is not None:
            return [
                GridPoint(self.load, n, users_for_load(self.load, n))
                for n in self.slot_grid
            ]
        return [
            GridPoint(g, self.slots, users_for_load(g, self.slots)) for g in self.loads
        ]
