# Licensed under the Apache License, Version 2.0
"""Text form and sampling of IRSA degree distributions."""

from __future__ import annotations

import math

import numpy as np

from .errors import DistributionError
from .models import DegreeDistribution

# Accepted slack before the probabilities are rescaled to sum to exactly 1.
PARSE_SUM_TOLERANCE = 1e-9


def parse_degree_distribution(spec: str) -> DegreeDistribution:
    """
    Parse "r:prob" pairs separated by commas, e.g. "2:0.25,3:0.60,8:0.15".

    Probabilities must already sum to 1 within 1e-9; they are then rescaled
    to absorb rounding. Anything further off is rejected rather than
    renormalised.
    """
    if spec is None or not spec.strip():
        raise DistributionError("empty degree distribution")

    probs: dict[int, float] = {}
    for raw in spec.split(","):
        pair = raw.strip()
        r_text, sep, p_text = pair.partition(":")
        if not sep or not r_text.strip() or not p_text.strip():
            raise DistributionError(f"malformed pair {pair!r}, expected 'r:prob'")
        try:
            r = int(r_text.strip())
            p = float(p_text.strip())
        except ValueError as e:
            raise DistributionError(f"malformed pair {pair!r}: {e}") from e
        if r < 2:
            raise DistributionError(f"replica count must be >= 2, got {r}")
        if r in probs:
            raise DistributionError(f"duplicate replica count {r}")
        if not math.isfinite(p) or p <= 0.0:
            raise DistributionError(f"probability for r={r} must be > 0, got {p}")
        probs[r] = p

    total = math.fsum(probs.values())
    if abs(total - 1.0) > PARSE_SUM_TOLERANCE:
        raise DistributionError(f"probabilities sum to {total:.12g}, expected 1")

    return DegreeDistribution.from_mapping({r: p / total for r, p in probs.items()})


def sample_degree(dist: DegreeDistribution, rng: np.random.Generator) -> int:
    """Draw a replica count r with probability lambda_r."""
    if len(dist.entries) == 1:
        return dist.entries[0][0]
    return int(rng.choice(dist.degrees, p=dist.probabilities))


def sample_degrees(
    dist: DegreeDistribution, rng: np.random.Generator, size: int
) -> np.ndarray:
    """Vectorised form of sample_degree for a whole frame."""
    if len(dist.entries) == 1:
        return np.full(size, dist.entries[0][0], dtype=np.int64)
    return rng.choice(np.asarray(dist.degrees), size=size, p=dist.probabilities)
