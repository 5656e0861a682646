from .frame_service import generate_frame, sic_decode
from .simulation_service import SimulationResult, SimulationService, wilson_interval
from .census_service import census, expected_counts, find_occurrences
from .analytics_service import (
    effective_bins,
    exact_occupancy_pmf,
    fit_bin_count,
    plr_error_floor,
    plr_s1_only,
    poisson_bin_parameter,
)
from .report_service import ReportService
from .sweep_service import SweepService


__all__ = [
    "ReportService",
    "SimulationResult",
    "SimulationService",
    "SweepService",
    "census",
    "effective_bins",
    "exact_occupancy_pmf",
    "expected_counts",
    "find_occurrences",
    "fit_bin_count",
    "generate_frame",
    "plr_error_floor",
    "plr_s1_only",
    "poisson_bin_parameter",
    "sic_decode",
    "wilson_interval",
]
