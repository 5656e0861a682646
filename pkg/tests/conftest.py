# Shared fixtures: hand-built frames and the ladders used across the suite.
from typing import Callable, Sequence

import pytest

from nomairsa.domain import (
    FrameInstance,
    PowerLadder,
    UserTransmission,
    build_power_ladder,
    parse_degree_distribution,
)

FrameFactory = Callable[..., FrameInstance]


@pytest.fixture
def ladder3() -> PowerLadder:
    return build_power_ladder(3.0, 3)


@pytest.fixture
def ladder1() -> PowerLadder:
    return build_power_ladder(3.0, 1)


@pytest.fixture
def lambda1():
    return parse_degree_distribution("2:0.5,3:0.5")


@pytest.fixture
def make_frame() -> FrameFactory:
    """make_frame(n, [(slots, levels), ...]) with user ids 0, 1, ... in order."""

    def _make(n: int, placements: Sequence[tuple[Sequence[int], Sequence[int]]]):
        users = []
        for uid, (slots, levels) in enumerate(placements):
            pairs = sorted(zip(slots, levels))
            users.append(
                UserTransmission(
                    uid, tuple(s for s, _ in pairs), tuple(lv for _, lv in pairs)
                )
            )
        return FrameInstance(n=n, users=tuple(users))

    return _make
