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
from collections import deque
from concurrent.futures import Future, ProcessPoolExecutor
from typing import Callable, Iterable, Iterator, Optional, TypeVar

T = TypeVar("T")
R = TypeVar("R")

logger = logging.getLogger(__name__)

_EXHAUSTED = object()


class ProcessPoolBatchExecutor:
    """
    Fans batches out over worker processes while keeping result order.

    - Keeps at most `workers * lookahead` batches in flight, so a consumer
      that stops early wastes a bounded amount of work.
    - Results are yielded strictly in task order; which worker ran a batch
      never shows up in the output.
    - Context manager support (`with ProcessPoolBatchExecutor(4) as ex:`).
    """

    def __init__(self, workers: int, *, lookahead: int = 2) -> None:
        if workers < 1:
            raise ValueError(f"workers must be >= 1, got {workers}")
        self._workers = int(workers)
        self._window = max(1, self._workers * int(lookahead))
        self._pool: Optional[ProcessPoolExecutor] = ProcessPoolExecutor(
            max_workers=self._workers
        )
        logger.debug("Started process pool with %d workers", self._workers)

    # --- lifecycle ----------------------------------------------------------

    def close(self) -> None:
        if self._pool is not None:
            self._pool.shutdown(wait=True, cancel_futures=True)
            self._pool = None

    def __enter__(self) -> ProcessPoolBatchExecutor:
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        self.close()

    # --- public API ---------------------------------------------------------

    def map_ordered(self, fn: Callable[[T], R], tasks: Iterable[T]) -> Iterator[R]:
        if self._pool is None:
            raise RuntimeError("executor is closed")
        pool = self._pool
        pending: deque[Future[R]] = deque()
        it = iter(tasks)
        try:
            for task in it:
                pending.append(pool.submit(fn, task))
                if len(pending) >= self._window:
                    break
            while pending:
                result = pending.popleft().result()
                nxt = next(it, _EXHAUSTED)
                if nxt is not _EXHAUSTED:
                    pending.append(pool.submit(fn, nxt))  # type: ignore[arg-type]
                yield result
        finally:
            # Consumer stopped early (or failed): drop speculative work.
            for fut in pending:
                fut.cancel()
