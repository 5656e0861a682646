# tests/cli/test_cli_roundtrip.py
import csv
from pathlib import Path

from typer.testing import CliRunner
from nomairsa.cli.app import app

runner = CliRunner()


def _rows(path: Path):
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


def test_cli_sweep_writes_csv(tmp_path: Path):
    out = tmp_path / "sweep.csv"
    res = runner.invoke(
        app,
        [
            "sweep",
            "--slots", "40",
            "--loads", "0.5,1.0",
            "--max-frames", "100",
            "--min-losses", "0",
            "--out", str(out),
        ],
    )
    assert res.exit_code == 0, res.output
    rows = _rows(out)
    assert [r["m"] for r in rows] == ["20", "40"]
    assert all(r["frames"] == "100" for r in rows)
    assert all(r["dist"] == "2:0.5,3:0.5" for r in rows)


def test_cli_sweep_with_census(tmp_path: Path):
    out = tmp_path / "run.csv"
    res = runner.invoke(
        app,
        [
            "sweep",
            "--slots", "40",
            "--loads", "0.8",
            "--max-frames", "50",
            "--census",
            "--out", str(out),
        ],
    )
    assert res.exit_code == 0, res.output
    assert (tmp_path / "run.census.csv").exists()


def test_cli_census(tmp_path: Path):
    out = tmp_path / "census.csv"
    res = runner.invoke(
        app,
        [
            "census",
            "--slots", "40",
            "--levels", "1",
            "--loads", "0.6",
            "--max-frames", "200",
            "--out", str(out),
        ],
    )
    assert res.exit_code == 0, res.output
    (row,) = _rows(out)
    assert row["frames"] == "200"
    assert row["L"] == "1"
    assert row["s1_blocking"] == row["s1_structural"]


def test_cli_fit_prints_coefficients(tmp_path: Path):
    out = tmp_path / "fit.csv"
    res = runner.invoke(
        app,
        [
            "fit",
            "--slot-grid", "20,30,40",
            "--load", "0.4",
            "--max-frames", "2000",
            "--batch-frames", "500",
            "--out", str(out),
        ],
    )
    assert res.exit_code == 0, res.output
    assert "a0 = " in res.output
    assert "a1 = " in res.output
    assert [r["n"] for r in _rows(out)] == ["20", "30", "40"]
