# Licensed under the Apache License, Version 2.0


class NomaIrsaError(Exception):
    """Base exception for domain-specific errors."""


class ConfigurationError(NomaIrsaError):
    """Bad CLI args, bad config file lines or an unusable sweep specification."""


class DistributionError(NomaIrsaError, ValueError):
    """Malformed degree-distribution text or probabilities that do not sum to 1."""


class PowerLadderError(NomaIrsaError, ValueError):
    """Power ladder requested with no levels or a non-finite threshold."""


class InstanceTooLargeError(NomaIrsaError):
    """Exact occupancy computation requested beyond the supported size."""


class FitError(NomaIrsaError):
    """Degenerate sample set handed to the bin-count fit."""


class ReportError(NomaIrsaError):
    """Output path cannot be created or written."""
