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
Closed-form error-floor machinery.

Users of the qualifying degree are balls; the slot combinations a stopping
set can occupy are bins. Y_t, the number of bins holding exactly t balls, is
approximately Poisson(beta_t) with beta_t = (b / t!) (m / b)^t, and the loss
rate follows by summing over the stopping-set catalog, each set weighted by
its power-match probability 1/L^mu.

All results are error-floor approximations: they ignore congestion and are
meaningless in the waterfall region, where the decoder stalls for reasons
other than these three small sets. Distributions without degree-2 or
degree-3 users get 0 (no catalogued set can form).

The exact occupancy law is not taken from its usual printed closed form,
which is easy to get subtly wrong; it is computed by enumeration for tiny
instances and by a bin-by-bin recursion otherwise.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy import stats

from ..domain.errors import ConfigurationError, FitError, InstanceTooLargeError
from ..domain.models import DegreeDistribution
from ..domain.stopping_sets import (
    STOPPING_SET_BY_ID,
    STOPPING_SETS,
    BibInstance,
    StoppingSetId,
    StoppingSetSpec,
)

logger = logging.getLogger(__name__)

EXHAUSTIVE_LIMIT = 10**6  # bins**balls assignments
MAX_EXACT_BALLS = 200


# --- balls into bins ------------------------------------------------------


def poisson_bin_parameter(inst: BibInstance, t: int) -> float:
    """beta_t = (b / t!) (m / b)^t."""
    if t < 1:
        raise ValueError(f"occupancy t must be >= 1, got {t}")
    return inst.bins / math.factorial(t) * (inst.balls / inst.bins) ** t


def enumerate_occupancy_counts(balls: int, bins: int, t: int) -> list[int]:
    """
    Brute force: walk all bins**balls assignments and count, for each y, the
    ones with exactly y bins holding t balls.
    """
    if bins**balls > EXHAUSTIVE_LIMIT:
        raise InstanceTooLargeError(
            f"{bins}**{balls} assignments exceed the enumeration limit"
        )
    counts: dict[int, int] = {}
    for assignment in itertools.product(range(bins), repeat=balls):
        load = [0] * bins
        for b in assignment:
            load[b] += 1
        y = sum(1 for c in load if c == t)
        counts[y] = counts.get(y, 0) + 1
    top = max(counts)
    return [counts.get(y, 0) for y in range(top + 1)]


def recursive_occupancy_pmf(balls: int, bins: int, t: int) -> np.ndarray:
    """Pr{Y_t = y} for y = 0..min(bins, balls // t) via the bin-by-bin recursion."""
    # P[k, y]: probability that k balls spread over the current number of
    # bins leave exactly y bins with t balls. Adding one bin: the new bin
    # receives j ~ Binomial(k, 1/bins_now) balls, the rest recurse.
    y_max = bins if t == 0 else min(bins, balls // t)
    ks = np.arange(balls + 1)
    js = ks[:, None]
    prob = np.zeros((balls + 1, y_max + 2))
    prob[:, 0] = 1.0
    if t <= balls:
        prob[t, 0] = 0.0
        prob[t, 1] = 1.0
    for b in range(2, bins + 1):
        # binom[j, k] = Pr{the new bin gets j of k balls}
        binom = stats.binom.pmf(js, ks[None, :], 1.0 / b)
        nxt = np.zeros_like(prob)
        for j in range(balls + 1):
            weight = binom[j, j:][:, None]
            shifted = prob[: balls + 1 - j]
            if j == t:
                nxt[j:, 1:] += weight * shifted[:, :-1]
            else:
                nxt[j:, :] += weight * shifted
        prob = nxt
    return prob[balls, : y_max + 1]


def exact_occupancy_pmf(balls: int, bins: int, t: int) -> list[float]:
    """
    Exact Pr{Y_t = y} for y = 0, 1, ... under uniform independent placement.

    Tiny instances are enumerated; larger ones (balls <= 200, any bin count)
    use the bin-by-bin recursion.
    """
    if balls < 0 or bins < 1 or t < 0:
        raise ValueError("need balls >= 0, bins >= 1, t >= 0")
    if bins**balls <= EXHAUSTIVE_LIMIT:
        counts = enumerate_occupancy_counts(balls, bins, t)
        total = bins**balls
        return [float(Fraction(c, total)) for c in counts]
    if balls > MAX_EXACT_BALLS:
        raise InstanceTooLargeError(
            f"exact occupancy limited to {MAX_EXACT_BALLS} balls, got {balls}"
        )
    pmf = recursive_occupancy_pmf(balls, bins, t)
    last = int(np.max(np.nonzero(pmf > 0.0)[0])) if np.any(pmf > 0.0) else 0
    return [float(p) for p in pmf[: last + 1]]


def exact_occupancy_mean(balls: int, bins: int, t: int) -> float:
    """E[Y_t] = bins * Pr{a given bin holds exactly t balls}."""
    return bins * float(stats.binom.pmf(t, balls, 1.0 / bins))


# --- stopping sets --------------------------------------------------------


def effective_bins(spec: StoppingSetSpec, n: int) -> float:
    """
    Bin count b(mu, nu) for a set: C(n,2) for S1, C(n,3) for S3, and the
    fitted C(n,2)/sqrt(2(n-2)) for S2 (used for every n >= 4, i.e. also
    outside the range it was calibrated on).
    """
    if n < 4:
        raise ConfigurationError(f"{spec.id.value} needs n >= 4 slots, got {n}")
    if spec.id is StoppingSetId.S1:
        return float(math.comb(n, 2))
    if spec.id is StoppingSetId.S2:
        return math.comb(n, 2) / math.sqrt(2 * (n - 2))
    return float(math.comb(n, 3))


def _check_plr_args(n: int, m: int, num_levels: int) -> None:
    if n < 4:
        raise ConfigurationError(f"error-floor formula needs n >= 4, got {n}")
    if m < 0:
        raise ConfigurationError(f"user count must be >= 0, got {m}")
    if num_levels < 1:
        raise ConfigurationError(f"need at least one power level, got {num_levels}")


def plr_terms(
    n: int, m: int, num_levels: int, dist: DegreeDistribution
) -> tuple[float, float, float]:
    """The S1, S2 and S3 contributions of the one-shot PLR formula."""
    _check_plr_args(n, m, num_levels)
    lam2 = dist.lambda_(2)
    lam3 = dist.lambda_(3)
    L = float(num_levels)
    s1 = (1 / L**2) * 2 * lam2**2 * m / (n * (n - 1))
    s2 = (1 / L**3) * 2 * (n - 2) * (lam2 * m) ** 2 / (n**2 * (n - 1) ** 2)
    s3 = (1 / L**3) * 6 * lam3**2 * m / (n * (n - 1) * (n - 2))
    return (s1, s2, s3)


def plr_error_floor(n: int, m: int, num_levels: int, dist: DegreeDistribution) -> float:
    """One-shot error-floor PLR (sum of the three stopping-set terms)."""
    return math.fsum(plr_terms(n, m, num_levels, dist))


def plr_s1_only(n: int, m: int, num_levels: int, dist: DegreeDistribution) -> float:
    """Baseline that only accounts for S1."""
    return plr_terms(n, m, num_levels, dist)[0]


def catalog_contribution(
    spec: StoppingSetSpec, n: int, m: int, num_levels: int, dist: DegreeDistribution
) -> float:
    """
    Per-user loss rate from one catalogued set, assembled generically:
    (1/L^mu) * (m̄/m) * (1/(nu-1)!) * (m̄/b̄)^(nu-1).

    The (m̄/m) factor turns the per-ball rate into a per-user rate.
    """
    _check_plr_args(n, m, num_levels)
    if m == 0:
        return 0.0
    balls = dist.lambda_(spec.qualifying_degree) * m
    bins = effective_bins(spec, n)
    per_ball = (balls / bins) ** (spec.nu - 1) / math.factorial(spec.nu - 1)
    return per_ball * (balls / m) / num_levels**spec.mu


def plr_catalog_sum(
    n: int, m: int, num_levels: int, dist: DegreeDistribution
) -> float:
    """
    Generic catalog assembly. It matches plr_error_floor term by term for S1
    and S3; the published S2 term equals this one divided by 2*lambda_2, so
    the totals coincide when lambda_2 is 0 or 1/2.
    """
    return math.fsum(
        catalog_contribution(spec, n, m, num_levels, dist) for spec in STOPPING_SETS
    )


# --- bin-count fit --------------------------------------------------------


@dataclass(frozen=True)
class FitSample:
    """
    Measured per-ball loss rate attributed to S2 at frame length n.
    `losses` (0 = unknown) sets the point's weight in the fit.
    """

    n: int
    balls: float
    plr: float
    losses: int = 0


@dataclass(frozen=True)
class BinCountFit:
    a0: float
    a1: float
    g_squared: tuple[float, ...]
    residuals: tuple[float, ...]


def bin_count_from_plr(balls: float, plr: float, *, finite_population: bool = False) -> float:
    """
    Invert the per-ball S2 loss rate, plr = (m̄/b̄)^2 / 2, for b̄.

    With `finite_population` the m̄^2 is replaced by (m̄-1)(m̄-2), the exact
    count of ordered partner pairs for a fixed number of balls.
    """
    if plr <= 0:
        raise FitError(f"plr must be > 0, got {plr}")
    if finite_population:
        if balls <= 2:
            raise FitError(f"finite-population identity needs more than 2 balls, got {balls}")
        pairs = (balls - 1) * (balls - 2)
    else:
        pairs = balls * balls
    return math.sqrt(pairs / (2 * plr))


def fit_bin_count(
    samples: Sequence[FitSample], *, finite_population: bool = False
) -> BinCountFit:
    """
    Least-squares fit of g(n)^2 = C(n,2)^2 / b̄(n)^2 to a0 + a1*n.

    The S2 bin count b̄ = C(n,2)/sqrt(2(n-2)) corresponds to a0 = -4, a1 = 2.

    When every sample carries its loss count the fit is weighted: the
    relative error of a Monte-Carlo rate goes as 1/sqrt(losses), so point i
    gets weight sqrt(losses_i) / g_i^2. Otherwise all points weigh the same.
    """
    if len({s.n for s in samples}) < 3:
        raise FitError("need samples at 3 or more distinct frame lengths")
    ns = np.array([s.n for s in samples], dtype=float)
    g_squared = np.array(
        [
            (
                math.comb(s.n, 2)
                / bin_count_from_plr(s.balls, s.plr, finite_population=finite_population)
            )
            ** 2
            for s in samples
        ]
    )
    weights = None
    if all(s.losses > 0 for s in samples):
        weights = np.sqrt([float(s.losses) for s in samples]) / g_squared
    a1, a0 = np.polyfit(ns, g_squared, 1, w=weights)
    residuals = g_squared - (a0 + a1 * ns)
    logger.debug("Bin-count fit: a0=%.6g a1=%.6g", a0, a1)
    return BinCountFit(
        a0=float(a0),
        a1=float(a1),
        g_squared=tuple(float(v) for v in g_squared),
        residuals=tuple(float(v) for v in residuals),
    )


def stopping_set(sid: StoppingSetId) -> StoppingSetSpec:
    return STOPPING_SET_BY_ID[sid]
