# Licensed under the Apache License, Version 2.0 (the "License");
# ...
from __future__ import annotations

import csv
import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Iterator, Optional, Sequence, TextIO

from ..domain.errors import ReportError
from ..domain.stopping_sets import STOPPING_SETS
from .results import CensusRow, FitReport, SweepRow

logger = logging.getLogger(__name__)

SWEEP_FIELDS = [
    "G",
    "m",
    "n",
    "L",
    "gamma_db",
    "dist",
    "plr_sim",
    "ci_low",
    "ci_high",
    "plr_analytic",
    "plr_s1only",
    "frames",
    "losses",
    "seed",
]

_CENSUS_SET_COLUMNS = (
    "structural",
    "se",
    "beta",
    "blocking",
    "blocking_expected",
    "blocking_fraction",
)

CENSUS_FIELDS = (
    ["G", "m", "n", "L", "gamma_db", "dist", "frames"]
    + [
        f"{spec.id.value.lower()}_{col}"
        for spec in STOPPING_SETS
        for col in _CENSUS_SET_COLUMNS
    ]
    + ["residual_frames", "covered_frames", "seed"]
)

FIT_FIELDS = ["n", "m", "balls", "frames", "losses", "plr", "b_bar", "g_squared"]


def fmt_float(value: Optional[float]) -> str:
    """9 significant digits; None becomes an empty cell."""
    if value is None:
        return ""
    return f"{value:.9g}"


def census_path(out: Path) -> Path:
    """Companion census file written next to a sweep CSV: <stem>.census.csv."""
    return out.with_name(f"{out.stem}.census.csv")


class ReportService:
    """
    Writes sweep, census and fit results as CSV.

    Notes:
      - Column order is fixed (SWEEP_FIELDS, CENSUS_FIELDS, FIT_FIELDS) so
        downstream plotting scripts can rely on it.
      - Floats are written with 9 significant digits; rerunning a sweep with
        the same seed reproduces the file byte for byte.
      - Any OSError while creating or writing the file surfaces as ReportError.
    """

    @contextmanager
    def _open(self, out: Path) -> Iterator[TextIO]:
        try:
            out.parent.mkdir(parents=True, exist_ok=True)
            with open(out, "w", newline="", encoding="utf-8") as f:
                yield f
        except OSError as exc:
            raise ReportError(f"cannot write {out}: {exc}") from exc

    def _write(
        self, out: Path, fieldnames: list[str], rows: Sequence[dict[str, Any]]
    ) -> Path:
        with self._open(out) as f:
            writer = csv.DictWriter(f, fieldnames=fieldnames)
            writer.writeheader()
            for row in rows:
                writer.writerow(row)
        logger.info("Wrote %d rows to %s", len(rows), out)
        return out

    def write_sweep(self, rows: Sequence[SweepRow], out: Path) -> Path:
        return self._write(
            out,
            SWEEP_FIELDS,
            [
                {
                    "G": fmt_float(r.load),
                    "m": r.m,
                    "n": r.n,
                    "L": r.levels,
                    "gamma_db": fmt_float(r.gamma_db),
                    "dist": r.dist,
                    "plr_sim": fmt_float(r.estimate.plr),
                    "ci_low": fmt_float(r.estimate.ci_low),
                    "ci_high": fmt_float(r.estimate.ci_high),
                    "plr_analytic": fmt_float(r.plr_analytic),
                    "plr_s1only": fmt_float(r.plr_s1only),
                    "frames": r.estimate.frames,
                    "losses": r.estimate.losses,
                    "seed": r.estimate.seed,
                }
                for r in rows
            ],
        )

    def write_census(self, rows: Sequence[CensusRow], out: Path) -> Path:
        records: list[dict[str, Any]] = []
        for r in rows:
            record: dict[str, Any] = {
                "G": fmt_float(r.load),
                "m": r.m,
                "n": r.n,
                "L": r.levels,
                "gamma_db": fmt_float(r.gamma_db),
                "dist": r.dist,
                "frames": r.report.frames,
            }
            for spec in STOPPING_SETS:
                prefix = spec.id.value.lower()
                expected = r.expected[spec.id]
                record[f"{prefix}_structural"] = fmt_float(
                    r.report.structural_mean(spec.id)
                )
                record[f"{prefix}_se"] = fmt_float(r.report.structural_se(spec.id))
                record[f"{prefix}_beta"] = fmt_float(expected.beta)
                record[f"{prefix}_blocking"] = fmt_float(
                    r.report.blocking_mean(spec.id)
                )
                record[f"{prefix}_blocking_expected"] = fmt_float(expected.blocking)
                record[f"{prefix}_blocking_fraction"] = fmt_float(
                    r.report.blocking_fraction(spec.id)
                )
            record["residual_frames"] = r.report.residual_frames
            record["covered_frames"] = r.report.covered_frames
            record["seed"] = r.seed
            records.append(record)
        return self._write(out, CENSUS_FIELDS, records)

    def write_fit(self, report: FitReport, out: Path) -> Path:
        return self._write(
            out,
            FIT_FIELDS,
            [
                {
                    "n": p.n,
                    "m": p.m,
                    "balls": fmt_float(p.balls),
                    "frames": p.estimate.frames,
                    "losses": p.estimate.losses,
                    "plr": fmt_float(p.estimate.plr),
                    "b_bar": fmt_float(p.b_bar),
                    "g_squared": fmt_float(g2),
                }
                for p, g2 in zip(report.points, report.fit.g_squared)
            ],
        )

    @staticmethod
    def format_fit(report: FitReport) -> str:
        """Plain-text summary printed by `nomairsa fit`."""
        identity = "finite-population" if report.finite_population else "poisson"
        lines = [
            f"g(n)^2 = a0 + a1*n  ({identity} identity, G={report.load:.9g})",
            f"a0 = {report.fit.a0:.6f}",
            f"a1 = {report.fit.a1:.6f}",
            "n,g_squared,residual",
        ]
        for p, g2, res in zip(report.points, report.fit.g_squared, report.fit.residuals):
            lines.append(f"{p.n},{g2:.9g},{res:.9g}")
        return "\n".join(lines)
