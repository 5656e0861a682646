# tests/integration/test_error_floor_acceptance.py
#
# Statistical acceptance runs. They simulate millions of frames and are
# deselected by default; run them with `pytest -m slow`.
import os

import pytest

from nomairsa.adapters.executor import ProcessPoolBatchExecutor
from nomairsa.domain import StoppingRule, SystemConfig, parse_degree_distribution
from nomairsa.domain.power import build_power_ladder
from nomairsa.domain.stopping_sets import StoppingSetId
from nomairsa.domain.sweep import SweepSpec, users_for_load
from nomairsa.services import ReportService, SimulationService, SweepService
from nomairsa.services.analytics_service import plr_error_floor, plr_s1_only
from nomairsa.services.census_service import expected_counts

pytestmark = pytest.mark.slow

WORKERS = os.cpu_count() or 1
LAMBDA_1 = "2:0.5,3:0.5"
LAMBDA_2 = "2:0.25,3:0.60,8:0.15"
LAMBDA_3 = "3:1.0"
STOP = StoppingRule(max_frames=10_000_000, min_loss_events=200)


@pytest.fixture(scope="module")
def simulator():
    with ProcessPoolBatchExecutor(WORKERS) as ex:
        yield SimulationService(ex, batch_frames=2000)


def _plr(simulator, n, load, levels, dist, stop=STOP, seed=1):
    config = SystemConfig(
        n=n,
        m=users_for_load(load, n),
        dist=parse_degree_distribution(dist),
        ladder=build_power_ladder(3.0, levels),
    )
    return simulator.estimate_plr(config, stop, seed)


@pytest.mark.parametrize("dist", [LAMBDA_1, LAMBDA_2, LAMBDA_3])
@pytest.mark.parametrize("load", [0.2, 0.4, 0.6, 0.8])
def test_simulation_matches_error_floor(simulator, dist, load):
    est = _plr(simulator, 200, load, 3, dist)
    analytic = plr_error_floor(
        200, users_for_load(load, 200), 3, parse_degree_distribution(dist)
    )
    assert est.losses >= 200 or est.frames == STOP.max_frames
    assert abs(est.plr - analytic) / analytic <= 0.30


def test_practical_load_with_mixed_degrees(simulator):
    m = users_for_load(1.2, 200)
    analytic = plr_error_floor(200, m, 3, parse_degree_distribution(LAMBDA_2))
    assert analytic <= 1e-3
    est = _plr(simulator, 200, 1.2, 3, LAMBDA_2)
    assert analytic / 2 <= est.plr <= 2 * analytic


@pytest.mark.parametrize("levels", [2, 3, 4])
def test_s1_baseline_is_further_off_than_the_full_formula(simulator, levels):
    dist = parse_degree_distribution(LAMBDA_1)
    m = users_for_load(1.0, 200)
    est = _plr(simulator, 200, 1.0, levels, LAMBDA_1)
    full = plr_error_floor(200, m, levels, dist)
    baseline = plr_s1_only(200, m, levels, dist)
    assert baseline < est.plr
    assert (est.plr - baseline) / est.plr > abs(est.plr - full) / est.plr


def test_longer_frames_lower_the_loss_rate(simulator):
    dist = parse_degree_distribution(LAMBDA_1)
    plrs = []
    for n in (100, 200, 400):
        est = _plr(simulator, n, 0.8, 3, LAMBDA_1)
        analytic = plr_error_floor(n, users_for_load(0.8, n), 3, dist)
        assert abs(est.plr - analytic) / analytic <= 0.30
        plrs.append(est.plr)
    assert plrs[0] > plrs[1] > plrs[2]


def test_census_matches_poisson_expectations(simulator):
    config = SystemConfig(
        n=200,
        m=80,
        dist=parse_degree_distribution(LAMBDA_1),
        ladder=build_power_ladder(3.0, 3),
    )
    result = simulator.run(
        config, StoppingRule(100_000, 0), 7, with_census=True
    )
    report = result.tally.census
    assert report is not None and report.frames == 100_000
    expected = expected_counts(config)
    z99 = 2.5758
    for sid in StoppingSetId:
        mean = report.structural_mean(sid)
        assert abs(mean - expected[sid].beta) <= 3 * report.structural_se(sid)
        total = report.structural[sid]
        if total:
            p = 1 / 3 ** (2 if sid is StoppingSetId.S1 else 3)
            half = z99 * (p * (1 - p) / total) ** 0.5
            assert abs(report.blocking_fraction(sid) - p) <= half + 1 / total


def test_fit_recovers_triangle_bin_count(tmp_path):
    spec = SweepSpec(
        slots=200,
        levels=1,
        gamma_db=3.0,
        dist="2:1.0",
        loads=(0.4,),
        stop=StoppingRule(max_frames=1_000_000, min_loss_events=0),
        seed=1,
        out=tmp_path / "fit.csv",
        slot_grid=(50, 100, 200, 400),
        load=0.4,
    )
    with ProcessPoolBatchExecutor(WORKERS) as ex:
        service = SweepService(
            SimulationService(ex, batch_frames=5000), ReportService()
        )
        report = service.run_fit(spec)
    assert 1.8 <= report.fit.a1 <= 2.2
    assert -6.0 <= report.fit.a0 <= -2.0


def test_low_load_residuals_sit_in_blocking_stopping_sets(simulator):
    config = SystemConfig(
        n=200,
        m=users_for_load(0.3, 200),
        dist=parse_degree_distribution(LAMBDA_1),
        ladder=build_power_ladder(3.0, 3),
    )
    result = simulator.run(config, StoppingRule(200_000, 0), 3, with_census=True)
    report = result.tally.census
    assert report is not None
    assert report.residual_frames >= 100
    assert report.covered_frames / report.residual_frames >= 0.95
