# Licensed under the Apache License, Version 2.0
"""
Structural detection of S1/S2/S3 in a transmitted frame.

Counting looks at the frame before SIC and ignores replicas of users outside
an occurrence, even though those could in principle be captured and free a
slot. `residual_covered` measures how much that approximation leaves out.

Blocking means power equality among the *members* of an occurrence in each
of its slots; other replicas sharing those slots are not considered.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Optional

from ..domain.models import DecodeOutcome, FrameInstance, SystemConfig, UserTransmission
from ..domain.stopping_sets import (
    STOPPING_SETS,
    BibInstance,
    FrameCensus,
    StoppingSetId,
    StoppingSetOccurrence,
)
from .analytics_service import effective_bins, poisson_bin_parameter


def _identical_pairs(
    users: Iterable[UserTransmission], kind: StoppingSetId
) -> list[StoppingSetOccurrence]:
    groups: dict[tuple[int, ...], list[UserTransmission]] = defaultdict(list)
    for u in users:
        groups[u.slots].append(u)
    found = []
    for slots, members in groups.items():
        for a, b in itertools.combinations(members, 2):
            found.append(
                StoppingSetOccurrence(
                    kind=kind,
                    users=tuple(sorted((a.user_id, b.user_id))),
                    slots=slots,
                    # slots are sorted identically, so levels line up
                    blocking=a.levels == b.levels,
                )
            )
    return found


def _triangles(users: Iterable[UserTransmission]) -> list[StoppingSetOccurrence]:
    by_pair: dict[tuple[int, int], list[UserTransmission]] = defaultdict(list)
    neighbours: dict[int, set[int]] = defaultdict(set)
    for u in users:
        x, y = u.slots
        by_pair[(x, y)].append(u)
        neighbours[x].add(y)
        neighbours[y].add(x)

    found = []
    # Each slot triangle x < y < z is reached once, from its (x, y) edge.
    for (x, y), on_xy in by_pair.items():
        for z in neighbours[x]:
            if z <= y or (y, z) not in by_pair:
                continue
            for u, v, w in itertools.product(on_xy, by_pair[(x, z)], by_pair[(y, z)]):
                # u = (x, y), v = (x, z), w = (y, z); levels follow slot order
                blocking = (
                    u.levels[0] == v.levels[0]
                    and u.levels[1] == w.levels[0]
                    and v.levels[1] == w.levels[1]
                )
                found.append(
                    StoppingSetOccurrence(
                        kind=StoppingSetId.S2,
                        users=tuple(sorted((u.user_id, v.user_id, w.user_id))),
                        slots=(x, y, z),
                        blocking=blocking,
                    )
                )
    return found


def find_occurrences(
    frame: FrameInstance, kinds: Optional[Iterable[StoppingSetId]] = None
) -> list[StoppingSetOccurrence]:
    """Every occurrence of the requested shapes (all three by default)."""
    wanted = set(kinds) if kinds is not None else {s.id for s in STOPPING_SETS}
    degree2 = [u for u in frame.users if u.degree == 2]
    found: list[StoppingSetOccurrence] = []
    if StoppingSetId.S1 in wanted:
        found.extend(_identical_pairs(degree2, StoppingSetId.S1))
    if StoppingSetId.S2 in wanted:
        found.extend(_triangles(degree2))
    if StoppingSetId.S3 in wanted:
        degree3 = (u for u in frame.users if u.degree == 3)
        found.extend(_identical_pairs(degree3, StoppingSetId.S3))
    return found


def census(frame: FrameInstance) -> FrameCensus:
    """Structural and blocking counts of S1, S2, S3 in one frame."""
    structural = {s.id: 0 for s in STOPPING_SETS}
    blocking = {s.id: 0 for s in STOPPING_SETS}
    for occ in find_occurrences(frame):
        structural[occ.kind] += 1
        if occ.blocking:
            blocking[occ.kind] += 1
    return FrameCensus(structural=structural, blocking=blocking)


def residual_covered(
    frame: FrameInstance,
    outcome: DecodeOutcome,
    occurrences: Optional[list[StoppingSetOccurrence]] = None,
) -> bool:
    """True when every residual user sits in some blocking occurrence."""
    if occurrences is None:
        occurrences = find_occurrences(frame)
    members: set[int] = set()
    for occ in occurrences:
        if occ.blocking:
            members.update(occ.users)
    return outcome.residual_users <= members


@dataclass(frozen=True)
class ExpectedCount:
    beta: float
    blocking: float


def expected_counts(config: SystemConfig) -> dict[StoppingSetId, ExpectedCount]:
    """Poisson parameter beta_nu per set, and beta_nu / L^mu for blocking ones."""
    num_levels = config.ladder.num_levels
    out: dict[StoppingSetId, ExpectedCount] = {}
    for spec in STOPPING_SETS:
        balls = config.dist.lambda_(spec.qualifying_degree) * config.m
        bins = effective_bins(spec, config.n)
        beta = poisson_bin_parameter(BibInstance(balls=balls, bins=bins), spec.nu)
        out[spec.id] = ExpectedCount(beta=beta, blocking=beta / num_levels**spec.mu)
    return out
