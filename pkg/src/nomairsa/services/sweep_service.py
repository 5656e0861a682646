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

from ..domain.degree import parse_degree_distribution
from ..domain.errors import ConfigurationError, FitError
from ..domain.models import DegreeDistribution, StoppingRule, SystemConfig
from ..domain.power import build_power_ladder
from ..domain.stopping_sets import StoppingSetId
from ..domain.sweep import GridPoint, SweepSpec
from .analytics_service import (
    FitSample,
    bin_count_from_plr,
    fit_bin_count,
    plr_error_floor,
    plr_s1_only,
)
from .census_service import expected_counts
from .report_service import ReportService, census_path
from .results import CensusRow, FitPoint, FitReport, SweepRow
from .simulation_service import SimulationService

logger = logging.getLogger(__name__)


class SweepService:
    """
    Runs a SweepSpec grid point by point and hands the rows to ReportService.

    Grid points are processed in order; parallelism lives inside each point
    (frame batches), so the CSV is the same for any worker count.
    """

    def __init__(self, simulator: SimulationService, reports: ReportService) -> None:
        self._simulator = simulator
        self._reports = reports

    @staticmethod
    def _config(
        point: GridPoint, dist: DegreeDistribution, spec: SweepSpec, levels: int
    ) -> SystemConfig:
        return SystemConfig(
            n=point.n,
            m=point.m,
            dist=dist,
            ladder=build_power_ladder(spec.gamma_db, levels),
        )

    def run_sweep(self, spec: SweepSpec) -> list[SweepRow]:
        """Simulated vs analytic PLR at every grid point, written to spec.out."""
        dist = parse_degree_distribution(spec.dist)
        rows: list[SweepRow] = []
        census_rows: list[CensusRow] = []
        for point in spec.grid():
            config = self._config(point, dist, spec, spec.levels)
            analytic = plr_error_floor(point.n, point.m, spec.levels, dist)
            baseline = (
                plr_s1_only(point.n, point.m, spec.levels, dist)
                if spec.s1_baseline
                else None
            )
            result = self._simulator.run(
                config, spec.stop, spec.seed, with_census=spec.census
            )
            est = result.estimate
            logger.info(
                "G=%.3f n=%d m=%d: plr_sim=%.3e [%.3e, %.3e] plr_analytic=%.3e "
                "(%d frames, %d losses)",
                point.load,
                point.n,
                point.m,
                est.plr,
                est.ci_low,
                est.ci_high,
                analytic,
                est.frames,
                est.losses,
            )
            rows.append(
                SweepRow(
                    load=point.load,
                    m=point.m,
                    n=point.n,
                    levels=spec.levels,
                    gamma_db=spec.gamma_db,
                    dist=dist.format(),
                    estimate=est,
                    plr_analytic=analytic,
                    plr_s1only=baseline,
                )
            )
            if result.tally.census is not None:
                census_rows.append(
                    CensusRow(
                        load=point.load,
                        m=point.m,
                        n=point.n,
                        levels=spec.levels,
                        gamma_db=spec.gamma_db,
                        dist=dist.format(),
                        report=result.tally.census,
                        expected=expected_counts(config),
                        seed=spec.seed,
                    )
                )

        self._reports.write_sweep(rows, spec.out)
        if spec.census:
            self._reports.write_census(census_rows, census_path(spec.out))
        return rows

    def run_census(self, spec: SweepSpec) -> list[CensusRow]:
        """
        Count S1/S2/S3 over exactly `max_frames` frames per grid point and
        compare with the Poisson expectations. The loss target is ignored.
        """
        dist = parse_degree_distribution(spec.dist)
        stop = StoppingRule(max_frames=spec.stop.max_frames, min_loss_events=0)
        rows: list[CensusRow] = []
        for point in spec.grid():
            config = self._config(point, dist, spec, spec.levels)
            result = self._simulator.run(config, stop, spec.seed, with_census=True)
            report = result.tally.census
            assert report is not None
            expected = expected_counts(config)
            logger.info(
                "G=%.3f n=%d: census over %d frames, S1=%.4g (beta %.4g) "
                "S2=%.4g (beta %.4g) S3=%.4g (beta %.4g)",
                point.load,
                point.n,
                report.frames,
                report.structural_mean(StoppingSetId.S1),
                expected[StoppingSetId.S1].beta,
                report.structural_mean(StoppingSetId.S2),
                expected[StoppingSetId.S2].beta,
                report.structural_mean(StoppingSetId.S3),
                expected[StoppingSetId.S3].beta,
            )
            rows.append(
                CensusRow(
                    load=point.load,
                    m=point.m,
                    n=point.n,
                    levels=spec.levels,
                    gamma_db=spec.gamma_db,
                    dist=dist.format(),
                    report=report,
                    expected=expected,
                    seed=spec.seed,
                )
            )
        self._reports.write_census(rows, spec.out)
        return rows

    def run_fit(self, spec: SweepSpec, *, finite_population: bool = True) -> FitReport:
        """
        Measure the S2 loss rate over an n grid at one load with L = 1 and
        fit g(n)^2 = C(n,2)^2 / b̄(n)^2 = a0 + a1*n.
        """
        if spec.slot_grid is None:
            raise ConfigurationError("fit needs an n grid (--slot-grid)")
        if len(set(spec.slot_grid)) < 3:
            raise FitError("fit needs 3 or more distinct frame lengths")
        dist = parse_degree_distribution(spec.dist)
        lam2 = dist.lambda_(2)
        if lam2 <= 0:
            raise ConfigurationError(
                "fit needs degree-2 users: the triangle set only forms among them"
            )
        if spec.levels != 1:
            logger.info("fit runs with L=1; ignoring levels=%d", spec.levels)

        points: list[FitPoint] = []
        samples: list[FitSample] = []
        for point in spec.grid():
            config = self._config(point, dist, spec, 1)
            result = self._simulator.run(
                config, spec.stop, spec.seed, attribute_to=StoppingSetId.S2
            )
            est = result.estimate
            if est.losses == 0:
                raise FitError(
                    f"no S2 losses observed at n={point.n}; raise --max-frames"
                )
            balls = lam2 * point.m
            b_bar = bin_count_from_plr(
                balls, est.plr, finite_population=finite_population
            )
            logger.info(
                "n=%d m=%d: S2 plr=%.4e b_bar=%.4g (%d frames, %d losses)",
                point.n,
                point.m,
                est.plr,
                b_bar,
                est.frames,
                est.losses,
            )
            points.append(
                FitPoint(n=point.n, m=point.m, balls=balls, estimate=est, b_bar=b_bar)
            )
            samples.append(
                FitSample(n=point.n, balls=balls, plr=est.plr, losses=est.losses)
            )

        fit = fit_bin_count(samples, finite_population=finite_population)
        report = FitReport(
            load=spec.load,
            finite_population=finite_population,
            points=tuple(points),
            fit=fit,
        )
        self._reports.write_fit(report, spec.out)
        return report
