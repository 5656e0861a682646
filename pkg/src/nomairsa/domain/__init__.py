from .errors import (
    ConfigurationError,
    DistributionError,
    FitError,
    InstanceTooLargeError,
    NomaIrsaError,
    PowerLadderError,
    ReportError,
)
from .models import (
    DecodeOutcome,
    DegreeDistribution,
    FrameInstance,
    PlrEstimate,
    PowerLadder,
    StoppingRule,
    SystemConfig,
    UserTransmission,
)
from .degree import parse_degree_distribution, sample_degree
from .power import build_power_ladder, sinr, sinr_decodable

__all__ = [
    "ConfigurationError",
    "DecodeOutcome",
    "DegreeDistribution",
    "DistributionError",
    "FitError",
    "FrameInstance",
    "InstanceTooLargeError",
    "NomaIrsaError",
    "PlrEstimate",
    "PowerLadder",
    "PowerLadderError",
    "ReportError",
    "StoppingRule",
    "SystemConfig",
    "UserTransmission",
    "build_power_ladder",
    "parse_degree_distribution",
    "sample_degree",
    "sinr",
    "sinr_decodable",
]
