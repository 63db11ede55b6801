"""First-order Edgeworth correction to the normal approximation.

The correction polynomial is built from Monte Carlo estimates of the
asymptotic moments: the skewness-type third moment under the invariant
measure (approximated by a burn-in start) and the centering bias of the
initial distribution.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import stats as sps

from .errors import ParameterError, ScaleError
from .maps import MapSpec
from .stats import Moments, Observable, batch_birkhoff_sums


def estimate_asymptotic_moments(
    spec: MapSpec, h: Observable, n: int, reps: int, rng: np.random.Generator
) -> Moments:
    """Monte Carlo estimates of all four moment quantities.

    The mean, scale, and third moment come from an invariant-start batch
    (burn-in of n steps from Uniform); the initial-bias term comes from a
    separate Uniform-start batch centered at that mean.
    """
    if reps < 2:
        raise ParameterError("need at least 2 replications")
    inv_sums = batch_birkhoff_sums(spec, h, n, reps, rng, burn_in=n)
    a = float(inv_sums.mean() / n)
    sd = float(np.std(inv_sums / math.sqrt(n), ddof=1))
    third = float(np.mean(((inv_sums - n * a) / n ** (1.0 / 3.0)) ** 3))
    init_sums = batch_birkhoff_sums(spec, h, n, reps, rng)
    bias = float(np.mean(init_sums - n * a))
    return Moments(
        spatial_mean=a, long_run_sd=sd, third_moment=third, init_bias=bias
    )


def edgeworth_cdf(m: Moments, n: int, x) -> np.ndarray:
    """Normal CDF plus the n^{-1/2} skewness/initialization correction."""
    if not m.long_run_sd > 0.0:
        raise ScaleError("scale must be positive")
    if n < 1:
        raise ParameterError("n must be >= 1")
    x = np.asarray(x, dtype=float)
    sd = m.long_run_sd
    poly = m.third_moment / (6.0 * sd ** 3) * (1.0 - x * x) + m.init_bias / sd
    val = sps.norm.cdf(x) + poly * sps.norm.pdf(x) / math.sqrt(n)
    return np.clip(val, 0.0, 1.0)


def sup_distance(f, g, grid) -> float:
    """Max |F - G| over the grid plus both sides of any ECDF jumps.

    f and g are vectorized CDF callables; objects exposing `cdf`,
    `cdf_left`, and `jumps` (such as Ecdf) are handled on both sides of
    each jump.
    """
    pts = [np.asarray(grid, dtype=float)]
    if len(pts[0]) == 0:
        raise ParameterError("empty evaluation grid")
    for side in (f, g):
        jumps = getattr(side, "jumps", None)
        if jumps is not None:
            pts.append(np.asarray(jumps, dtype=float))
    pts = np.unique(np.concatenate(pts))

    def right(side, x):
        return side.cdf(x) if hasattr(side, "cdf") else side(x)

    def left(side, x):
        if hasattr(side, "cdf_left"):
            return side.cdf_left(x)
        return right(side, x)

    d_right = np.abs(np.asarray(right(f, pts)) - np.asarray(right(g, pts)))
    d_left = np.abs(np.asarray(left(f, pts)) - np.asarray(left(g, pts)))
    return float(max(d_right.max(), d_left.max()))


def default_grid(lo: float = -5.0, hi: float = 5.0, size: int = 2001) -> np.ndarray:
    return np.linspace(lo, hi, size)
