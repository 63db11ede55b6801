"""Birkhoff sums, empirical distributions, and the two scale estimators."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ParameterError
from .maps import MapSpec, states_of, step_batch


@dataclass(frozen=True)
class Observable:
    name: str
    fn: Callable[[np.ndarray], np.ndarray]
    power: int | None = None  # set for pure powers, enables the compiled kernel


def identity_observable() -> Observable:
    return Observable("x", lambda x: x, power=1)


def square_observable() -> Observable:
    return Observable("x^2", lambda x: x * x, power=2)


def quartic_observable() -> Observable:
    return Observable("x^4", lambda x: (x * x) * (x * x), power=4)


OBSERVABLES = {
    "x": identity_observable,
    "x^2": square_observable,
    "x^4": quartic_observable,
}


@dataclass(frozen=True)
class Moments:
    """Asymptotic quantities of the rescaled Birkhoff sums."""

    spatial_mean: float  # A
    long_run_sd: float  # sigma
    third_moment: float = math.nan  # invariant-start cubed-sum limit
    init_bias: float = math.nan  # centered first moment under the initial law


def birkhoff_sum(traj, h: Observable) -> float:
    """Sum of h along the trajectory, compensated."""
    states = states_of(traj)
    if len(states) == 0:
        raise ParameterError("empty trajectory")
    return math.fsum(h.fn(states))


class Ecdf:
    """Empirical distribution of a bootstrap (or Monte Carlo) sample."""

    def __init__(self, values):
        v = np.sort(np.asarray(values, dtype=float))
        if len(v) == 0:
            raise ParameterError("empty sample")
        self.values = v
        self.count = len(v)

    def cdf(self, x):
        return np.searchsorted(self.values, x, side="right") / self.count

    def cdf_left(self, x):
        return np.searchsorted(self.values, x, side="left") / self.count

    @property
    def jumps(self) -> np.ndarray:
        return self.values

    def quantile(self, p: float) -> float:
        return ecdf_quantile(self, p)


def ecdf_quantile(e: Ecdf, p: float) -> float:
    """ceil(p * B)-th order statistic: the generalized inverse of the ECDF."""
    if not 0.0 < p < 1.0:
        raise ParameterError("probability must lie strictly in (0, 1)")
    k = math.ceil(p * e.count)
    return float(e.values[k - 1])


def sigma_star(boot_sums, n: int) -> float:
    """Bootstrap scale: root mean square of (S* - mean S*) / sqrt(n)."""
    s = np.asarray(boot_sums, dtype=float)
    if len(s) < 2:
        raise ParameterError("need at least 2 bootstrap sums")
    dev = (s - s.mean()) / math.sqrt(n)
    return float(np.sqrt(np.mean(dev * dev)))


def batch_birkhoff_sums(
    spec: MapSpec,
    h: Observable,
    n: int,
    reps: int,
    rng: np.random.Generator,
    burn_in: int = 0,
) -> np.ndarray:
    """Birkhoff sums over `reps` independent trajectories started Uniform(support).

    With burn_in > 0 the starting states are advanced that many steps first,
    approximating an invariant-measure start.
    """
    lo, hi = spec.support
    x = rng.uniform(lo, hi, size=reps)
    for _ in range(burn_in):
        x = step_batch(spec, x, rng)
    total = np.zeros(reps)
    comp = np.zeros(reps)
    for k in range(n):
        hx = h.fn(x)
        y = hx - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if k < n - 1:
            x = step_batch(spec, x, rng)
    return total


def true_sigma_mc(
    spec: MapSpec, h: Observable, n: int, reps: int, rng: np.random.Generator
) -> Moments:
    """Monte Carlo stand-in for the unavailable long-run variance estimator.

    Simulates `reps` fresh length-n trajectories; the spatial mean is the
    grand mean of S_n / n and sigma the sample standard deviation of
    S_n / sqrt(n).
    """
    sums = batch_birkhoff_sums(spec, h, n, reps, rng)
    a = float(sums.mean() / n)
    sd = float(np.std(sums / math.sqrt(n), ddof=1))
    return Moments(spatial_mean=a, long_run_sd=sd)
