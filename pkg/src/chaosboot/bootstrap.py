"""Pivoted and non-pivoted bootstrap confidence intervals for the time average.

Each bootstrap replicate starts from a kernel-resampled initial state and
iterates the fitted spline map deterministically; the two non-bootstrap
baselines (Gaussian and Student-t) invert the same pivot inequality with
reference quantiles instead of bootstrap quantiles.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats as sps

from . import kernels
from .density import BandwidthRule, sample_initial_batch
from .errors import DegenerateDataError, ParameterError, ScaleError
from .maps import states_of
from .spline import SplineEstimate, SplineKind, build_map_estimate, kernel_arrays
from .stats import Ecdf, Observable, birkhoff_sum, ecdf_quantile, sigma_star


class Mode(enum.Enum):
    PIVOTED = "pivoted"
    NONPIVOTED = "nonpivoted"


class Method(enum.Enum):
    T_APPROX = "t"
    NPBOOT = "npboot"
    GAUSSIAN = "Gaussian"
    PBOOT = "pboot"


class Side(enum.Enum):
    TWO_SIDED = "two-sided"
    UPPER_BOUNDED = "upper-bounded"
    LOWER_BOUNDED = "lower-bounded"


# spline boundary rule used for extrapolation, per bootstrap flavor
_DEFAULT_SPLINE = {
    Mode.PIVOTED: SplineKind.NATURAL_CUBIC,
    Mode.NONPIVOTED: SplineKind.FMM_CUBIC,
}


@dataclass(frozen=True)
class BootstrapConfig:
    mode: Mode
    B: int = 1000
    alpha: float = 0.05
    spline_kind: SplineKind | None = None
    bandwidth: BandwidthRule = field(default_factory=BandwidthRule)
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ParameterError("alpha must lie in (0, 1)")
        if self.B < 2:
            raise ParameterError("need at least 2 bootstrap iterations")

    @property
    def effective_spline_kind(self) -> SplineKind:
        return self.spline_kind or _DEFAULT_SPLINE[self.mode]


@dataclass(frozen=True)
class BootstrapDistribution:
    pivots: np.ndarray  # B pivot values T*_n
    grand_mean: float  # mean of the bootstrap Birkhoff sums
    sigma_star: float  # bootstrap scale, used only by pivoted intervals
    mode: Mode


@dataclass(frozen=True)
class ConfidenceInterval:
    lower: float
    upper: float
    level: float
    side: Side
    method: Method

    def contains(self, a: float) -> bool:
        return self.lower <= a <= self.upper


def _estimate_sums(
    est: SplineEstimate, h: Observable, x0: np.ndarray, n: int
) -> np.ndarray:
    arrays = kernel_arrays(est)
    if h.power in (1, 2, 4):
        return kernels.pivot_sums(x0, n, h.power, *arrays)
    # generic observable: iterate with the batch evaluator
    x = np.array(x0, dtype=float)
    total = np.zeros_like(x)
    comp = np.zeros_like(x)
    for k in range(n):
        hx = h.fn(x)
        y = hx - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if k < n - 1:
            x = kernels.eval_spline(x, *arrays)
    return total


def run_bootstrap(
    data,
    h: Observable,
    cfg: BootstrapConfig,
    discontinuities,
    support,
    rng: np.random.Generator | None = None,
) -> BootstrapDistribution:
    """Fit the map estimate and produce the B bootstrap pivot values."""
    states = states_of(data)
    n = len(states)
    if n < 4:
        raise ParameterError("need at least 4 data points")
    est = build_map_estimate(
        data, discontinuities, cfg.effective_spline_kind, support=support
    )
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    x0 = sample_initial_batch(states, cfg.bandwidth, support, rng, cfg.B)
    sums = _estimate_sums(est, h, x0, n)
    grand = float(sums.mean())
    scale = sigma_star(sums, n)
    dev = (sums - grand) / math.sqrt(n)
    if cfg.mode is Mode.PIVOTED:
        pivots = dev / scale if scale > 0.0 else np.zeros_like(dev)
    else:
        pivots = dev
    return BootstrapDistribution(
        pivots=pivots, grand_mean=grand, sigma_star=scale, mode=cfg.mode
    )


def _invert_pivot(
    sn: float, n: int, scale: float, q_lo: float, q_hi: float, q_one: tuple[float, float],
    side: Side, level: float, method: Method,
) -> ConfidenceInterval:
    """Solve (S_n - n A) / (sqrt(n) scale) in (q_lo, q_hi) for A."""
    root = math.sqrt(n)
    if side is Side.TWO_SIDED:
        lower = (sn - root * scale * q_hi) / n
        upper = (sn - root * scale * q_lo) / n
    elif side is Side.UPPER_BOUNDED:
        lower = -math.inf
        upper = (sn - root * scale * q_one[0]) / n
    else:
        lower = (sn - root * scale * q_one[1]) / n
        upper = math.inf
    return ConfidenceInterval(lower, upper, level, side, method)


def pivoted_interval(
    data, h: Observable, cfg: BootstrapConfig, sigma_hat: float,
    boot: BootstrapDistribution, side: Side,
) -> ConfidenceInterval:
    if sigma_hat <= 0.0:
        raise ScaleError("sigma estimate must be positive")
    if boot.mode is not Mode.PIVOTED:
        raise ParameterError("bootstrap distribution not in pivoted mode")
    if boot.sigma_star <= 0.0:
        raise ScaleError("degenerate bootstrap distribution")
    sn = birkhoff_sum(data, h)
    n = len(states_of(data))
    e = Ecdf(boot.pivots)
    a = cfg.alpha
    return _invert_pivot(
        sn, n, sigma_hat,
        ecdf_quantile(e, a / 2), ecdf_quantile(e, 1 - a / 2),
        (ecdf_quantile(e, a), ecdf_quantile(e, 1 - a)),
        side, 1 - a, Method.PBOOT,
    )


def nonpivoted_interval(
    data, h: Observable, boot: BootstrapDistribution, alpha: float, side: Side
) -> ConfidenceInterval:
    if boot.mode is not Mode.NONPIVOTED:
        raise ParameterError("bootstrap distribution not in non-pivoted mode")
    sn = birkhoff_sum(data, h)
    n = len(states_of(data))
    e = Ecdf(boot.pivots)
    return _invert_pivot(
        sn, n, 1.0,
        ecdf_quantile(e, alpha / 2), ecdf_quantile(e, 1 - alpha / 2),
        (ecdf_quantile(e, alpha), ecdf_quantile(e, 1 - alpha)),
        side, 1 - alpha, Method.NPBOOT,
    )


def gaussian_interval(
    data, h: Observable, sigma_hat: float, alpha: float, side: Side
) -> ConfidenceInterval:
    if sigma_hat <= 0.0:
        raise ScaleError("sigma estimate must be positive")
    sn = birkhoff_sum(data, h)
    n = len(states_of(data))
    z = sps.norm.ppf
    return _invert_pivot(
        sn, n, sigma_hat,
        float(z(alpha / 2)), float(z(1 - alpha / 2)),
        (float(z(alpha)), float(z(1 - alpha))),
        side, 1 - alpha, Method.GAUSSIAN,
    )


def t_interval(
    data, h: Observable, alpha: float, side: Side, use_raw_states: bool = False
) -> ConfidenceInterval:
    """Student-t baseline; the scale is the sample sd of the h-values
    (of the raw states when use_raw_states is set)."""
    states = states_of(data)
    n = len(states)
    if n < 2:
        raise ParameterError("need at least 2 data points")
    vals = states if use_raw_states else np.asarray(h.fn(states), dtype=float)
    s = float(np.std(vals, ddof=1))
    if s == 0.0:
        raise DegenerateDataError("zero sample standard deviation")
    sn = birkhoff_sum(data, h)
    q = sps.t(df=n - 1).ppf
    return _invert_pivot(
        sn, n, s,
        float(q(alpha / 2)), float(q(1 - alpha / 2)),
        (float(q(alpha)), float(q(1 - alpha))),
        side, 1 - alpha, Method.T_APPROX,
    )
