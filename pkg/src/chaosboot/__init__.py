"""Bootstrap confidence intervals for time averages of chaotic interval maps."""

from .bootstrap import (
    BootstrapConfig,
    BootstrapDistribution,
    ConfidenceInterval,
    Method,
    Mode,
    Side,
    gaussian_interval,
    nonpivoted_interval,
    pivoted_interval,
    run_bootstrap,
    t_interval,
)
from .density import BandwidthRule, sample_initial, ucv_bandwidth
from .edgeworth import edgeworth_cdf, estimate_asymptotic_moments, sup_distance
from .harness import (
    CoverageReport,
    ExperimentConfig,
    emit_table,
    run_coverage_experiment,
)
from .kernels import BACKEND as KERNEL_BACKEND
from .maps import (
    MapKind,
    MapSpec,
    Trajectory,
    doubling_map,
    drill_coefficients,
    drill_map,
    eval_map,
    generate_trajectory,
    logistic_map,
    perturbed_step,
)
from .spline import (
    SplineEstimate,
    SplineKind,
    build_map_estimate,
    eval_estimated_map,
    fit_spline,
)
from .stats import (
    Ecdf,
    Moments,
    Observable,
    birkhoff_sum,
    ecdf_quantile,
    sigma_star,
    true_sigma_mc,
)

__version__ = "0.1.0"
