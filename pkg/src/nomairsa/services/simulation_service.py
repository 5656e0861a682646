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

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np
from scipy import stats

from ..domain.models import PlrEstimate, StoppingRule, SystemConfig
from ..domain.stopping_sets import STOPPING_SET_BY_ID, CensusReport, StoppingSetId
from ..ports.executor import BatchExecutorPort
from .census_service import census, find_occurrences, residual_covered
from .frame_service import generate_frame, sic_decode

logger = logging.getLogger(__name__)


def frame_rng(master_seed: int, frame_index: int) -> np.random.Generator:
    """Stream for one frame, a pure function of (master_seed, frame_index)."""
    return np.random.default_rng((master_seed, frame_index))


def wilson_interval(
    losses: int, total: int, confidence: float = 0.95
) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if total == 0:
        return (0.0, 1.0)
    z = float(stats.norm.ppf(1 - (1 - confidence) / 2))
    p_hat = losses / total
    denominator = 1 + z**2 / total
    center = (p_hat + z**2 / (2 * total)) / denominator
    spread = (
        z * math.sqrt((p_hat * (1 - p_hat) + z**2 / (4 * total)) / total) / denominator
    )
    # Clamp against rounding so the point estimate always sits inside.
    lower = min(max(0.0, center - spread), p_hat)
    upper = max(min(1.0, center + spread), p_hat)
    return (lower, upper)


@dataclass(frozen=True)
class BatchTask:
    """
    Frames [start, start + count) of one run.

    With `attribute_to` set, only residual users that belong to a structural
    occurrence of that stopping set count as losses, and only users of the
    set's qualifying degree count towards the total.
    """

    config: SystemConfig
    master_seed: int
    start: int
    count: int
    attribute_to: Optional[StoppingSetId] = None
    with_census: bool = False


@dataclass
class BatchTally:
    frames: int = 0
    users: int = 0
    losses: int = 0
    census: Optional[CensusReport] = None

    def merge(self, other: BatchTally) -> None:
        self.frames += other.frames
        self.users += other.users
        self.losses += other.losses
        if other.census is not None:
            if self.census is None:
                self.census = CensusReport()
            self.census.merge(other.census)


def run_batch(task: BatchTask) -> BatchTally:
    """Simulate one batch. Module-level so worker processes can unpickle it."""
    config = task.config
    tally = BatchTally(census=CensusReport() if task.with_census else None)
    attributed = (
        STOPPING_SET_BY_ID[task.attribute_to] if task.attribute_to is not None else None
    )

    for index in range(task.start, task.start + task.count):
        frame = generate_frame(config, frame_rng(task.master_seed, index))
        outcome = sic_decode(frame, config.ladder)
        tally.frames += 1

        if attributed is None:
            tally.users += len(frame.users)
            tally.losses += len(outcome.residual_users)
        else:
            members: set[int] = set()
            for occ in find_occurrences(frame, kinds=(attributed.id,)):
                members.update(occ.users)
            tally.users += sum(
                1 for u in frame.users if u.degree == attributed.qualifying_degree
            )
            tally.losses += len(outcome.residual_users & members)

        if tally.census is not None:
            tally.census.add(census(frame))
            if outcome.residual_users:
                tally.census.residual_frames += 1
                if residual_covered(frame, outcome):
                    tally.census.covered_frames += 1

    return tally


@dataclass
class SimulationResult:
    estimate: PlrEstimate
    tally: BatchTally = field(default_factory=BatchTally)


class SimulationService:
    """
    Monte-Carlo PLR estimation over i.i.d. frames.

    Notes:
      * Frames are cut into batches of `batch_frames`; batch boundaries never
        depend on the executor, so any worker count reproduces the same run.
      * The stopping rule is checked after each batch in batch order. A loss
        target of 0 disables early stopping.
    """

    def __init__(
        self,
        executor: BatchExecutorPort,
        *,
        batch_frames: int = 1000,
        progress_every: int = 0,
    ) -> None:
        if batch_frames < 1:
            raise ValueError("batch_frames must be >= 1")
        self._executor = executor
        self._batch_frames = int(batch_frames)
        self._progress_every = int(progress_every)

    def _tasks(
        self,
        config: SystemConfig,
        stop: StoppingRule,
        master_seed: int,
        attribute_to: Optional[StoppingSetId],
        with_census: bool,
    ) -> Iterator[BatchTask]:
        start = 0
        while start < stop.max_frames:
            count = min(self._batch_frames, stop.max_frames - start)
            yield BatchTask(config, master_seed, start, count, attribute_to, with_census)
            start += count

    def run(
        self,
        config: SystemConfig,
        stop: StoppingRule,
        master_seed: int,
        *,
        attribute_to: Optional[StoppingSetId] = None,
        with_census: bool = False,
    ) -> SimulationResult:
        total = BatchTally(census=CensusReport() if with_census else None)
        tasks = self._tasks(config, stop, master_seed, attribute_to, with_census)
        results = self._executor.map_ordered(run_batch, tasks)
        batches = 0
        try:
            for tally in results:
                total.merge(tally)
                batches += 1
                if self._progress_every and batches % self._progress_every == 0:
                    logger.info(
                        "Progress: G=%.3f n=%d frames=%d losses=%d",
                        config.load,
                        config.n,
                        total.frames,
                        total.losses,
                    )
                if stop.min_loss_events and total.losses >= stop.min_loss_events:
                    break
        finally:
            close = getattr(results, "close", None)
            if close is not None:
                close()

        plr = total.losses / total.users if total.users else 0.0
        low, high = wilson_interval(total.losses, total.users)
        estimate = PlrEstimate(
            frames=total.frames,
            users_total=total.users,
            losses=total.losses,
            plr=plr,
            ci_low=low,
            ci_high=high,
            seed=master_seed,
        )
        logger.debug(
            "Simulated G=%.3f n=%d L=%d: %d frames, %d/%d lost",
            config.load,
            config.n,
            config.ladder.num_levels,
            estimate.frames,
            estimate.losses,
            estimate.users_total,
        )
        return SimulationResult(estimate=estimate, tally=total)

    def estimate_plr(
        self, config: SystemConfig, stop: StoppingRule, master_seed: int
    ) -> PlrEstimate:
        """Per-user PLR: simulate until `stop` and wrap up with a Wilson CI."""
        return self.run(config, stop, master_seed).estimate
