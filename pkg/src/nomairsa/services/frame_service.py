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
Frame generation and the SIC peeling decoder.

Protocol, per user and per frame:
  - draw a degree r from Lambda,
  - pick r distinct slots uniformly among the C(n, r) subsets,
  - draw a power level uniformly in [1, L] independently for *each replica*
    (not once per user); the 1/L^mu power-match probability of a stopping
    set relies on these per-slot draws being independent.

Decoder:
  Within a slot only the strongest remaining replica is tested. Any weaker
  replica faces the strongest one as interference plus everything the
  strongest faces minus itself, and has less power, so its SINR is strictly
  lower; if the strongest fails, everyone in the slot fails. Decoding a user
  removes all of its replicas from the frame, which only lowers interference
  elsewhere, so decodability is monotone and the fixed point does not depend
  on the slot visiting order.
"""

from __future__ import annotations

import logging
from typing import Optional, Sequence

import numpy as np

from ..domain.degree import sample_degrees
from ..domain.models import (
    DecodeOutcome,
    FrameInstance,
    PowerLadder,
    SystemConfig,
    UserTransmission,
)
from ..domain.errors import PowerLadderError
from ..domain.power import sinr_decodable

logger = logging.getLogger(__name__)


def generate_frame(config: SystemConfig, rng: np.random.Generator) -> FrameInstance:
    """Draw one MAC frame for `config.m` users."""
    n, m = config.n, config.m
    if m == 0:
        return FrameInstance(n=n, users=())

    degrees = sample_degrees(config.dist, rng, m)
    num_levels = config.ladder.num_levels

    slots_of: list[list[int]] = [[] for _ in range(m)]
    levels_of: list[list[int]] = [[] for _ in range(m)]

    # One vectorised draw per degree class, classes in ascending r.
    for r in sorted(set(degrees.tolist())):
        members = np.flatnonzero(degrees == r)
        if r == n:
            chosen = np.tile(np.arange(n), (members.size, 1))
        else:
            keys = rng.random((members.size, n))
            # The r smallest keys of a uniform row form a uniform r-subset.
            chosen = np.argpartition(keys, r - 1, axis=1)[:, :r]
        chosen = np.sort(chosen, axis=1)
        levels = rng.integers(1, num_levels + 1, size=(members.size, r))
        for row, uid in enumerate(members.tolist()):
            slots_of[uid] = chosen[row].tolist()
            levels_of[uid] = levels[row].tolist()

    users = tuple(
        UserTransmission(uid, tuple(slots_of[uid]), tuple(levels_of[uid]))
        for uid in range(m)
    )
    return FrameInstance(n=n, users=users)


def sic_decode(
    frame: FrameInstance,
    ladder: PowerLadder,
    slot_order: Optional[Sequence[int]] = None,
) -> DecodeOutcome:
    """
    Run SIC to its fixed point.

    A pass visits every slot (in `slot_order` when given) and, inside a slot,
    keeps cancelling the strongest remaining replica while it clears the
    threshold. Passes repeat until one makes no progress. `iterations` counts
    the passes that decoded at least one user, so it never exceeds m.
    """
    powers = ladder.levels
    gamma = ladder.gamma

    # slot -> list of (level, user_id) still undecoded
    occupancy: dict[int, list[tuple[int, int]]] = {}
    by_user: dict[int, UserTransmission] = {}
    for user in frame.users:
        by_user[user.user_id] = user
        for slot, level in zip(user.slots, user.levels):
            if level > ladder.num_levels:
                raise PowerLadderError(
                    f"user {user.user_id} uses level {level}, ladder has "
                    f"{ladder.num_levels}"
                )
            occupancy.setdefault(slot, []).append((level, user.user_id))

    order: Sequence[int] = (
        slot_order if slot_order is not None else sorted(occupancy.keys())
    )
    decoded: set[int] = set()
    iterations = 0

    while True:
        progress = False
        for slot in order:
            entries = occupancy.get(slot)
            while entries:
                level, uid = min(entries)
                interferers = (powers[lv - 1] for lv, u in entries if u != uid)
                if not sinr_decodable(powers[level - 1], interferers, gamma):
                    break
                decoded.add(uid)
                progress = True
                user = by_user[uid]
                for s, lv in zip(user.slots, user.levels):
                    occupancy[s].remove((lv, uid))
        if not progress:
            break
        iterations += 1

    residual = frozenset(by_user.keys()) - decoded
    if residual:
        logger.debug("SIC stalled with %d residual users", len(residual))
    return DecodeOutcome(
        decoded=frozenset(decoded), residual_users=residual, iterations=iterations
    )
