"""Single-qubit assessment toolkit for quantum annealers.

Simulates annealer output statistics from a four-parameter effective qubit
model, recovers those parameters per qubit by maximum likelihood, and
aggregates the results into chip-level analyses.
"""

__version__ = "0.1.0"

from .model import (
    ParameterError,
    QubitParams,
    density_matrix_expectation,
    effective_field,
    outcome_probability,
    spin_expectation,
)
from .simulator import RawCounts, SweepDesign, default_sweep, field_grid, sample_counts, simulate_chip
from .estimator import (
    EffectiveFieldEstimate,
    FitConfig,
    FitResult,
    empirical_estimates,
    fit_chip,
    fit_qubit,
    log_likelihood,
)
from .topology import ChimeraSpec, QubitSite, heatmap_grid, orientation_groups, parse_chip, site_of
from .analysis import (
    AnnealSweepPoint,
    DistributionSummary,
    TrendFit,
    build_report,
    fit_log_trend,
    orientation_split,
    spatial_report,
    summarize,
    sweep_point,
)
from .data_io import read_params, read_raw, write_params, write_raw, write_report
from .presets import preset_truth
