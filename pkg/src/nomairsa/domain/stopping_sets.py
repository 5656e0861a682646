# Licensed under the Apache License, Version 2.0
"""
The three stopping-set shapes used for the error-floor approximation.

    S1: 2 users x 2 replicas, same two slots             (mu=2, nu=2, lambda_2)
    S2: 3 users x 2 replicas on a triangle of 3 slots    (mu=3, nu=3, lambda_2)
    S3: 2 users x 3 replicas, same three slots           (mu=3, nu=2, lambda_3)

A structural occurrence only becomes blocking when, in each of its mu slots,
the member replicas share one power level (probability 1/L^mu).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping


class StoppingSetId(str, Enum):
    S1 = "S1"
    S2 = "S2"
    S3 = "S3"


@dataclass(frozen=True)
class StoppingSetSpec:
    id: StoppingSetId
    mu: int
    nu: int
    qualifying_degree: int

    @property
    def qualifying_lambda(self) -> str:
        return f"lambda_{self.qualifying_degree}"


STOPPING_SETS: tuple[StoppingSetSpec, ...] = (
    StoppingSetSpec(StoppingSetId.S1, mu=2, nu=2, qualifying_degree=2),
    StoppingSetSpec(StoppingSetId.S2, mu=3, nu=3, qualifying_degree=2),
    StoppingSetSpec(StoppingSetId.S3, mu=3, nu=2, qualifying_degree=3),
)

STOPPING_SET_BY_ID: Mapping[StoppingSetId, StoppingSetSpec] = {
    s.id: s for s in STOPPING_SETS
}


@dataclass(frozen=True)
class BibInstance:
    """m̄ balls thrown into b̄ bins; both may be fractional averages."""

    balls: float
    bins: float

    def __post_init__(self) -> None:
        if not self.bins > 0:
            raise ValueError(f"bins must be > 0, got {self.bins}")
        if self.balls < 0:
            raise ValueError(f"balls must be >= 0, got {self.balls}")


@dataclass(frozen=True)
class StoppingSetOccurrence:
    """One concrete S1/S2/S3 found in a frame (users and slots sorted)."""

    kind: StoppingSetId
    users: tuple[int, ...]
    slots: tuple[int, ...]
    blocking: bool


def _zero_counts() -> dict[StoppingSetId, int]:
    return {s.id: 0 for s in STOPPING_SETS}


@dataclass(frozen=True)
class FrameCensus:
    """Per-frame structural and blocking counts."""

    structural: Mapping[StoppingSetId, int]
    blocking: Mapping[StoppingSetId, int]


@dataclass
class CensusReport:
    """
    Census counters accumulated over frames. Squares are kept so that the
    standard error of the per-frame mean can be reported.
    """

    frames: int = 0
    structural: dict[StoppingSetId, int] = field(default_factory=_zero_counts)
    structural_sq: dict[StoppingSetId, int] = field(default_factory=_zero_counts)
    blocking: dict[StoppingSetId, int] = field(default_factory=_zero_counts)
    residual_frames: int = 0
    covered_frames: int = 0

    def add(self, frame: FrameCensus) -> None:
        self.frames += 1
        for sid, count in frame.structural.items():
            self.structural[sid] += count
            self.structural_sq[sid] += count * count
        for sid, count in frame.blocking.items():
            self.blocking[sid] += count

    def merge(self, other: CensusReport) -> None:
        self.frames += other.frames
        for sid in other.structural:
            self.structural[sid] += other.structural[sid]
            self.structural_sq[sid] += other.structural_sq[sid]
            self.blocking[sid] += other.blocking[sid]
        self.residual_frames += other.residual_frames
        self.covered_frames += other.covered_frames

    def structural_mean(self, sid: StoppingSetId) -> float:
        return self.structural[sid] / self.frames if self.frames else 0.0

    def blocking_mean(self, sid: StoppingSetId) -> float:
        return self.blocking[sid] / self.frames if self.frames else 0.0

    def structural_se(self, sid: StoppingSetId) -> float:
        if self.frames < 2:
            return 0.0
        mean = self.structural_mean(sid)
        var = (self.structural_sq[sid] - self.frames * mean * mean) / (self.frames - 1)
        return max(var, 0.0) ** 0.5 / self.frames**0.5

    def blocking_fraction(self, sid: StoppingSetId) -> float:
        total = self.structural[sid]
        return self.blocking[sid] / total if total else 0.0
