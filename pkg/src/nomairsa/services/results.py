# Licensed under the Apache License, Version 2.0
"""Row types handed from the sweep orchestration to the report writer."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from ..domain.models import PlrEstimate
from ..domain.stopping_sets import CensusReport, StoppingSetId
from .analytics_service import BinCountFit
from .census_service import ExpectedCount


@dataclass(frozen=True)
class SweepRow:
    load: float
    m: int
    n: int
    levels: int
    gamma_db: float
    dist: str
    estimate: PlrEstimate
    plr_analytic: float
    plr_s1only: Optional[float]


@dataclass(frozen=True)
class CensusRow:
    load: float
    m: int
    n: int
    levels: int
    gamma_db: float
    dist: str
    report: CensusReport
    expected: Mapping[StoppingSetId, ExpectedCount]
    seed: int


@dataclass(frozen=True)
class FitPoint:
    """One frame length of the bin-count fit; plr is per degree-2 user."""

    n: int
    m: int
    balls: float
    estimate: PlrEstimate
    b_bar: float


@dataclass(frozen=True)
class FitReport:
    load: float
    finite_population: bool
    points: tuple[FitPoint, ...]
    fit: BinCountFit
