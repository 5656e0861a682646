# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""
Value types shared by the simulator, the analytics and the census.

All types are frozen dataclasses: once built they can be handed to worker
processes and reused across frames without copying.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .errors import ConfigurationError, DistributionError, PowerLadderError

PROBABILITY_SUM_ATOL = 1e-12
LADDER_RTOL = 1e-12


@dataclass(frozen=True)
class DegreeDistribution:
    """
    Probability mass over replica counts: Lambda(x) = sum_r lambda_r x^r.

    `entries` holds (r, lambda_r) pairs sorted by r. Every r is >= 2 and the
    probabilities sum to 1 within 1e-12.
    """

    entries: tuple[tuple[int, float], ...]

    def __post_init__(self) -> None:
        if not self.entries:
            raise DistributionError("degree distribution has no entries")
        seen: set[int] = set()
        for r, lam in self.entries:
            if isinstance(r, bool) or not isinstance(r, int):
                raise DistributionError(f"replica count must be an integer: {r!r}")
            if r < 2:
                raise DistributionError(f"replica count must be >= 2, got {r}")
            if r in seen:
                raise DistributionError(f"duplicate replica count {r}")
            seen.add(r)
            if not (0.0 < lam <= 1.0):
                raise DistributionError(f"lambda_{r} = {lam} is outside (0, 1]")
        total = math.fsum(lam for _, lam in self.entries)
        if abs(total - 1.0) > PROBABILITY_SUM_ATOL:
            raise DistributionError(f"probabilities sum to {total!r}, expected 1")
        ordered = tuple(sorted(self.entries))
        if ordered != self.entries:
            object.__setattr__(self, "entries", ordered)

    @classmethod
    def from_mapping(cls, probs: Mapping[int, float]) -> DegreeDistribution:
        return cls(tuple(sorted(probs.items())))

    def lambda_(self, r: int) -> float:
        """Probability of transmitting exactly r replicas (0 when absent)."""
        for degree, lam in self.entries:
            if degree == r:
                return lam
        return 0.0

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(r for r, _ in self.entries)

    @property
    def probabilities(self) -> tuple[float, ...]:
        return tuple(lam for _, lam in self.entries)

    @property
    def max_degree(self) -> int:
        return self.entries[-1][0]

    @property
    def mean_degree(self) -> float:
        return math.fsum(r * lam for r, lam in self.entries)

    def format(self) -> str:
        """Canonical text form, accepted back by parse_degree_distribution."""
        return ",".join(f"{r}:{lam:.12g}" for r, lam in self.entries)


@dataclass(frozen=True)
class PowerLadder:
    """
    Received power levels p_1 > ... > p_L > 0 (noise-normalised) and the
    linear SINR threshold gamma they were built for. The levels must follow
    p_k = gamma (gamma + 1)^(L - k); build_power_ladder produces them.

    Levels are addressed 1-based, as in the protocol description: level 1 is
    the strongest.
    """

    gamma: float
    levels: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.levels:
            raise PowerLadderError("power ladder needs at least one level")
        if not (math.isfinite(self.gamma) and self.gamma > 0):
            raise PowerLadderError(f"gamma must be finite and > 0, got {self.gamma}")
        if self.levels[-1] <= 0:
            raise PowerLadderError("power levels must be positive")
        for hi, lo in zip(self.levels, self.levels[1:]):
            if not hi > lo:
                raise PowerLadderError("power levels must be strictly decreasing")
        top = len(self.levels)
        for k, p in enumerate(self.levels, start=1):
            expected = self.gamma * (self.gamma + 1.0) ** (top - k)
            if not math.isclose(p, expected, rel_tol=LADDER_RTOL):
                raise PowerLadderError(
                    f"level {k} is {p!r}, gamma(gamma+1)^(L-k) gives {expected!r}"
                )

    @property
    def num_levels(self) -> int:
        return len(self.levels)

    @property
    def gamma_db(self) -> float:
        return 10.0 * math.log10(self.gamma)

    def power(self, level: int) -> float:
        """Linear power of a 1-based level index."""
        if not 1 <= level <= len(self.levels):
            raise PowerLadderError(
                f"level {level} outside [1, {len(self.levels)}]"
            )
        return self.levels[level - 1]

    def interference_budget(self, k: int) -> float:
        """I_k: total power of the levels weaker than k (I_L = 0)."""
        self.power(k)
        return math.fsum(self.levels[k:])


@dataclass(frozen=True)
class SystemConfig:
    """n slots per frame, m active users, degree distribution and power ladder."""

    n: int
    m: int
    dist: DegreeDistribution
    ladder: PowerLadder

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ConfigurationError(f"slots per frame must be positive, got {self.n}")
        if self.m < 0:
            raise ConfigurationError(f"user count must be >= 0, got {self.m}")
        if self.dist.max_degree > self.n:
            raise ConfigurationError(
                f"r_max = {self.dist.max_degree} exceeds the frame length n = {self.n}"
            )

    @property
    def load(self) -> float:
        """Channel load G = m / n [packets/slot]."""
        return self.m / self.n


@dataclass(frozen=True)
class UserTransmission:
    """
    One user's replicas in a frame. `slots` is sorted; `levels[i]` is the
    power-level index drawn for the replica in `slots[i]`.
    """

    user_id: int
    slots: tuple[int, ...]
    levels: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.slots) != len(self.levels):
            raise ValueError("every replica needs exactly one power level")
        if len(set(self.slots)) != len(self.slots):
            raise ValueError(f"user {self.user_id} repeats a slot")
        if any(a > b for a, b in zip(self.slots, self.slots[1:])):
            raise ValueError(f"user {self.user_id} slots must be sorted")
        if any(lv < 1 for lv in self.levels):
            raise ValueError(f"user {self.user_id} has a level index below 1")

    @property
    def degree(self) -> int:
        return len(self.slots)

    @property
    def level_per_slot(self) -> dict[int, int]:
        return dict(zip(self.slots, self.levels))


@dataclass(frozen=True)
class FrameInstance:
    """All replica placements of one MAC frame."""

    n: int
    users: tuple[UserTransmission, ...]

    def __post_init__(self) -> None:
        for user in self.users:
            if user.slots and not (0 <= user.slots[0] and user.slots[-1] < self.n):
                raise ValueError(f"user {user.user_id} has a slot outside [0, {self.n})")

    @property
    def user_ids(self) -> frozenset[int]:
        return frozenset(u.user_id for u in self.users)


@dataclass(frozen=True)
class DecodeOutcome:
    """Fixed point reached by SIC: decoded and residual users partition the frame."""

    decoded: frozenset[int]
    residual_users: frozenset[int]
    iterations: int


@dataclass(frozen=True)
class StoppingRule:
    """
    Stop after `min_loss_events` losses or `max_frames` frames, whichever
    first. A loss target of 0 always runs the full `max_frames`.
    """

    max_frames: int
    min_loss_events: int

    def __post_init__(self) -> None:
        if self.max_frames < 1:
            raise ConfigurationError("at least one frame must be requested")
        if self.min_loss_events < 0:
            raise ConfigurationError("min_loss_events must be >= 0")


@dataclass(frozen=True)
class PlrEstimate:
    """Monte-Carlo packet loss rate with its 95% Wilson interval."""

    frames: int
    users_total: int
    losses: int
    plr: float
    ci_low: float
    ci_high: float
    seed: int

    def __post_init__(self) -> None:
        if not self.ci_low <= self.plr <= self.ci_high:
            raise ValueError("plr must lie inside its confidence interval")
