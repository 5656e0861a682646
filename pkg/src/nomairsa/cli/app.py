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

import logging
from pathlib import Path
from typing import Any, Optional

import typer

from ..adapters.executor import ProcessPoolBatchExecutor, SerialExecutor
from ..config import RunSettings, resolve_settings
from ..domain.errors import NomaIrsaError
from ..logging_config import setup_logging
from ..ports.executor import BatchExecutorPort
from ..services import ReportService, SimulationService, SweepService
from ..services.report_service import census_path

setup_logging()

app = typer.Typer(
    help="NOMA-IRSA lab - Monte-Carlo SIC simulation vs. error-floor analytics"
)

logger = logging.getLogger(__name__)


# ------------------------------
# Shared options
# ------------------------------

SLOTS = typer.Option(None, "--slots", help="Slots per frame n (load grid). [200]")
LEVELS = typer.Option(None, "--levels", help="Number of power levels L. [3]")
GAMMA_DB = typer.Option(None, "--gamma-db", help="SINR threshold in dB. [3.0]")
DIST = typer.Option(
    None, "--dist", help="Degree distribution, e.g. '2:0.5,3:0.5'."
)
LOADS = typer.Option(
    None, "--loads", help="Comma-separated channel loads G (packets/slot)."
)
SLOT_GRID = typer.Option(
    None, "--slot-grid", help="Comma-separated frame lengths n, run at --load."
)
LOAD = typer.Option(None, "--load", help="Channel load used with --slot-grid.")
SEED = typer.Option(None, "--seed", help="Master seed. [1]")
MAX_FRAMES = typer.Option(
    None, "--max-frames", help="Frame budget per grid point (1e7 style accepted)."
)
MIN_LOSSES = typer.Option(
    None, "--min-losses", help="Stop a point after this many losses (0 = never)."
)
OUT = typer.Option(None, "--out", help="CSV output path. [<command>.csv]")
CONFIG = typer.Option(
    None,
    "--config",
    exists=True,
    file_okay=True,
    dir_okay=False,
    help="key=value settings file; flags override it.",
)
WORKERS = typer.Option(None, "--workers", help="Worker processes. [1]")
BATCH_FRAMES = typer.Option(
    None, "--batch-frames", help="Frames per batch (fixes the reduction order)."
)
PROGRESS = typer.Option(
    None,
    "--progress",
    help="Log a progress line every N batches (e.g., 10). Omit to disable.",
)
VERBOSE = typer.Option(False, "--verbose", help="Enable verbose logging")


# ------------------------------
# Composition root
# ------------------------------


def _wire(settings: RunSettings) -> tuple[BatchExecutorPort, SweepService]:
    """
    Minimal composition root:
      SerialExecutor | ProcessPoolBatchExecutor -> SimulationService
      -> SweepService + ReportService
    """
    executor: BatchExecutorPort
    if settings.workers > 1:
        executor = ProcessPoolBatchExecutor(settings.workers)
    else:
        executor = SerialExecutor()
    simulator = SimulationService(
        executor,
        batch_frames=settings.batch_frames,
        progress_every=settings.progress,
    )
    return executor, SweepService(simulator, ReportService())


def _settings(
    command: str, flags: dict[str, Any], config: Optional[Path], verbose: bool
) -> RunSettings:
    if verbose:
        logging.getLogger().setLevel(logging.DEBUG)
        logger.debug("Verbose logging enabled")
    return resolve_settings(command, flags, config)


def _fail(exc: NomaIrsaError) -> typer.Exit:
    typer.echo(f"Error: {exc}", err=True)
    return typer.Exit(code=2)


# ------------------------------
# CLI Commands
# ------------------------------


@app.command()
def sweep(
    slots: Optional[int] = SLOTS,
    levels: Optional[int] = LEVELS,
    gamma_db: Optional[float] = GAMMA_DB,
    dist: Optional[str] = DIST,
    loads: Optional[str] = LOADS,
    slot_grid: Optional[str] = SLOT_GRID,
    load: Optional[float] = LOAD,
    seed: Optional[int] = SEED,
    max_frames: Optional[str] = MAX_FRAMES,
    min_losses: Optional[int] = MIN_LOSSES,
    out: Optional[Path] = OUT,
    s1_baseline: Optional[bool] = typer.Option(
        None,
        "--s1-baseline/--no-s1-baseline",
        help="Fill the plr_s1only column. [on]",
    ),
    census: Optional[bool] = typer.Option(
        None,
        "--census/--no-census",
        help="Also write <stem>.census.csv with stopping-set counts.",
    ),
    config: Optional[Path] = CONFIG,
    workers: Optional[int] = WORKERS,
    batch_frames: Optional[int] = BATCH_FRAMES,
    progress: Optional[int] = PROGRESS,
    verbose: bool = VERBOSE,
):
    """
    Simulated vs. analytic PLR over a load grid (or an n grid at --load).
    """
    flags = dict(
        slots=slots,
        levels=levels,
        gamma_db=gamma_db,
        dist=dist,
        loads=loads,
        slot_grid=slot_grid,
        load=load,
        seed=seed,
        max_frames=max_frames,
        min_losses=min_losses,
        out=out,
        s1_baseline=s1_baseline,
        census=census,
        workers=workers,
        batch_frames=batch_frames,
        progress=progress,
    )
    try:
        settings = _settings("sweep", flags, config, verbose)
        spec = settings.to_sweep_spec()
        executor, service = _wire(settings)
        with executor:
            rows = service.run_sweep(spec)
    except NomaIrsaError as exc:
        raise _fail(exc)

    typer.echo(f"Wrote {len(rows)} rows to {spec.out}", err=True)
    if spec.census:
        typer.echo(f"Wrote census to {census_path(spec.out)}", err=True)


@app.command("census")
def census_cmd(
    slots: Optional[int] = SLOTS,
    levels: Optional[int] = LEVELS,
    gamma_db: Optional[float] = GAMMA_DB,
    dist: Optional[str] = DIST,
    loads: Optional[str] = LOADS,
    slot_grid: Optional[str] = SLOT_GRID,
    load: Optional[float] = LOAD,
    seed: Optional[int] = SEED,
    max_frames: Optional[str] = MAX_FRAMES,
    out: Optional[Path] = OUT,
    config: Optional[Path] = CONFIG,
    workers: Optional[int] = WORKERS,
    batch_frames: Optional[int] = BATCH_FRAMES,
    progress: Optional[int] = PROGRESS,
    verbose: bool = VERBOSE,
):
    """
    Count S1/S2/S3 stopping sets over --max-frames frames per grid point and
    compare with their Poisson expectations.
    """
    flags = dict(
        slots=slots,
        levels=levels,
        gamma_db=gamma_db,
        dist=dist,
        loads=loads,
        slot_grid=slot_grid,
        load=load,
        seed=seed,
        max_frames=max_frames,
        out=out,
        workers=workers,
        batch_frames=batch_frames,
        progress=progress,
    )
    try:
        settings = _settings("census", flags, config, verbose)
        spec = settings.to_sweep_spec()
        executor, service = _wire(settings)
        with executor:
            rows = service.run_census(spec)
    except NomaIrsaError as exc:
        raise _fail(exc)

    typer.echo(f"Wrote {len(rows)} census rows to {spec.out}", err=True)


@app.command()
def fit(
    slot_grid: Optional[str] = SLOT_GRID,
    load: Optional[float] = LOAD,
    gamma_db: Optional[float] = GAMMA_DB,
    dist: Optional[str] = DIST,
    seed: Optional[int] = SEED,
    max_frames: Optional[str] = MAX_FRAMES,
    min_losses: Optional[int] = MIN_LOSSES,
    out: Optional[Path] = OUT,
    poisson_identity: Optional[bool] = typer.Option(
        None,
        "--poisson-identity/--finite-population",
        help="Invert the S2 loss rate with m̄^2 instead of (m̄-1)(m̄-2).",
    ),
    config: Optional[Path] = CONFIG,
    workers: Optional[int] = WORKERS,
    batch_frames: Optional[int] = BATCH_FRAMES,
    progress: Optional[int] = PROGRESS,
    verbose: bool = VERBOSE,
):
    """
    Fit the triangle-set bin count: g(n)^2 = a0 + a1*n over an n grid, L = 1.
    """
    flags = dict(
        slot_grid=slot_grid,
        load=load,
        gamma_db=gamma_db,
        dist=dist,
        seed=seed,
        max_frames=max_frames,
        min_losses=min_losses,
        out=out,
        poisson_identity=poisson_identity,
        workers=workers,
        batch_frames=batch_frames,
        progress=progress,
    )
    try:
        settings = _settings("fit", flags, config, verbose)
        spec = settings.to_sweep_spec()
        executor, service = _wire(settings)
        with executor:
            report = service.run_fit(
                spec, finite_population=not settings.poisson_identity
            )
    except NomaIrsaError as exc:
        raise _fail(exc)

    typer.echo(ReportService.format_fit(report))
    typer.echo(f"Wrote fit points to {spec.out}", err=True)
