import csv
from pathlib import Path

import pytest

from nomairsa.domain import PlrEstimate, ReportError
from nomairsa.domain.stopping_sets import CensusReport, StoppingSetId
from nomairsa.services.analytics_service import BinCountFit
from nomairsa.services.census_service import ExpectedCount
from nomairsa.services.report_service import (
    CENSUS_FIELDS,
    SWEEP_FIELDS,
    ReportService,
    census_path,
    fmt_float,
)
from nomairsa.services.results import CensusRow, FitPoint, FitReport, SweepRow


def _row(plr_s1only=1.23456789012e-5):
    return SweepRow(
        load=0.4,
        m=80,
        n=200,
        levels=3,
        gamma_db=3.0,
        dist="2:0.5,3:0.5",
        estimate=PlrEstimate(1000, 80000, 5, 6.25e-5, 2.7e-5, 1.46e-4, seed=7),
        plr_analytic=5.98123456789e-5,
        plr_s1only=plr_s1only,
    )


def test_sweep_header_is_fixed(tmp_path: Path):
    out = tmp_path / "nested" / "sweep.csv"
    written = ReportService().write_sweep([_row()], out)
    assert written == out
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == (
        "G,m,n,L,gamma_db,dist,plr_sim,ci_low,ci_high,plr_analytic,"
        "plr_s1only,frames,losses,seed"
    )
    assert lines[0].split(",") == SWEEP_FIELDS


def test_sweep_values_use_nine_significant_digits(tmp_path: Path):
    out = tmp_path / "sweep.csv"
    ReportService().write_sweep([_row(), _row(plr_s1only=None)], out)
    with open(out, newline="", encoding="utf-8") as f:
        rows = list(csv.DictReader(f))
    assert rows[0]["G"] == "0.4"
    assert rows[0]["dist"] == "2:0.5,3:0.5"
    assert rows[0]["plr_analytic"] == "5.98123457e-05"
    assert rows[0]["plr_s1only"] == "1.23456789e-05"
    assert rows[0]["frames"] == "1000"
    assert rows[0]["seed"] == "7"
    assert rows[1]["plr_s1only"] == ""


def test_fmt_float():
    assert fmt_float(None) == ""
    assert fmt_float(1 / 3) == "0.333333333"
    assert fmt_float(0.0) == "0"


def test_unwritable_target_raises_report_error(tmp_path: Path):
    blocker = tmp_path / "file.txt"
    blocker.write_text("x", encoding="utf-8")
    with pytest.raises(ReportError):
        ReportService().write_sweep([_row()], blocker / "sweep.csv")
    with pytest.raises(ReportError):
        ReportService().write_sweep([_row()], tmp_path)


def test_census_file_layout(tmp_path: Path):
    report = CensusReport(frames=4)
    report.structural[StoppingSetId.S1] = 2
    report.structural_sq[StoppingSetId.S1] = 2
    report.blocking[StoppingSetId.S1] = 1
    expected = {sid: ExpectedCount(beta=0.5, blocking=0.1) for sid in StoppingSetId}
    row = CensusRow(0.4, 80, 200, 3, 3.0, "2:0.5,3:0.5", report, expected, seed=1)
    out = census_path(tmp_path / "sweep.csv")
    assert out.name == "sweep.census.csv"
    ReportService().write_census([row], out)
    with open(out, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        assert reader.fieldnames == CENSUS_FIELDS
        (record,) = list(reader)
    assert record["s1_structural"] == "0.5"
    assert record["s1_blocking_fraction"] == "0.5"
    assert record["s2_structural"] == "0"
    assert record["s3_beta"] == "0.5"
    assert record["frames"] == "4"


def test_fit_file_and_summary(tmp_path: Path):
    est = PlrEstimate(100, 2000, 30, 0.015, 0.01, 0.02, seed=1)
    points = tuple(FitPoint(n, 20, 20.0, est, 30.0) for n in (50, 100, 200))
    report = FitReport(
        load=0.4,
        finite_population=True,
        points=points,
        fit=BinCountFit(-4.0, 2.0, (96.0, 196.0, 396.0), (0.0, 0.0, 0.0)),
    )
    out = tmp_path / "fit.csv"
    ReportService().write_fit(report, out)
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "n,m,balls,frames,losses,plr,b_bar,g_squared"
    assert lines[1] == "50,20,20,100,30,0.015,30,96"
    text = ReportService.format_fit(report)
    assert "a0 = -4.000000" in text
    assert "a1 = 2.000000" in text
    assert "finite-population" in text
    assert "200,396,0" in text
