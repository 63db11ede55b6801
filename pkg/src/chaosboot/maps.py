"""Interval maps used as data-generating processes.

Three concrete maps are supported: the doubling map, the rotary-drill map,
and the logistic map (r = 4).  Because iterating binary-shift maps in double
precision collapses to zero after ~53 steps, data generation injects a
2^-20-scale perturbation per step (Bernoulli noise for the doubling map, the
tent-conjugate update for the logistic map); the drill map needs none.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ParameterError, RetryCapError

DEFAULT_NOISE = 2.0 ** -20
REDRAW_CAP = 10 ** 6


class MapKind(enum.Enum):
    DOUBLING = "doubling"
    DRILL = "drill"
    LOGISTIC = "logistic"
    ESTIMATED_SPLINE = "estimated_spline"


class PerturbationKind(enum.Enum):
    NONE = "none"
    BINARY_NOISE = "binary"
    TENT_CONJUGATE_NOISE = "tent"


@dataclass(frozen=True)
class Perturbation:
    kind: PerturbationKind = PerturbationKind.NONE
    magnitude: float = DEFAULT_NOISE


@dataclass(frozen=True)
class MapSpec:
    kind: MapKind
    support: tuple[float, float] = (0.0, 1.0)
    discontinuities: tuple[float, ...] = ()
    drill_lambda: float = 3.0
    logistic_r: float = 4.0
    perturbation: Perturbation = field(default_factory=Perturbation)

    def __post_init__(self):
        lo, hi = self.support
        if not lo < hi:
            raise ParameterError(f"degenerate support {self.support}")
        for b in self.discontinuities:
            if not lo < b < hi:
                raise ParameterError(f"breakpoint {b} not interior to support")
        if self.kind is MapKind.DRILL and self.drill_lambda <= 1.0:
            raise ParameterError("drill parameter must exceed 1")
        if self.kind is MapKind.LOGISTIC and not 0.0 < self.logistic_r <= 4.0:
            raise ParameterError("logistic parameter must lie in (0, 4]")


@dataclass(frozen=True)
class Trajectory:
    states: np.ndarray
    spec: MapSpec | None = None

    def __len__(self):
        return len(self.states)


@dataclass(frozen=True)
class DrillParams:
    alpha: float
    q: tuple[float, ...]  # q_0 <= q_1 <= ... <= q_[Lambda] = 1/2


def doubling_map(perturbed: bool = True) -> MapSpec:
    pert = Perturbation(PerturbationKind.BINARY_NOISE) if perturbed else Perturbation()
    return MapSpec(MapKind.DOUBLING, discontinuities=(0.5,), perturbation=pert)


def logistic_map(r: float = 4.0, perturbed: bool = True) -> MapSpec:
    pert = (
        Perturbation(PerturbationKind.TENT_CONJUGATE_NOISE)
        if perturbed
        else Perturbation()
    )
    return MapSpec(MapKind.LOGISTIC, logistic_r=r, perturbation=pert)


def drill_map(lam: float = 3.0) -> MapSpec:
    # Known breakpoints handed to the spline fitter: the half-map piece
    # boundaries in (0, 1/2) together with 1/2 and their half-period copies.
    # The composed map has further (small) jumps, but splitting at all of
    # them would starve the per-segment fits at n = 25.
    params = drill_coefficients(lam)
    interior = sorted({q for q in params.q if 0.0 < q < 0.5})
    disc = tuple(interior) + (0.5,) + tuple(q + 0.5 for q in interior)
    return MapSpec(MapKind.DRILL, discontinuities=disc, drill_lambda=lam)


def drill_coefficients(lam: float) -> DrillParams:
    """Breakpoints q_0..q_[Lambda] and the expansion factor for the drill map."""
    if lam <= 1.0:
        raise ParameterError("drill parameter must exceed 1")
    alpha = lam / (lam - 1.0)
    big = int(lam)
    q = [0.0] * (big + 1)
    for k in range(1, big + 1):
        q[big - k] = max(0.0, 0.5 * (lam - 1.0 - k) / (lam - 1.0))
    q[big] = 0.5
    return DrillParams(alpha=alpha, q=tuple(q))


def _mod1(x):
    """x mod 1 with exact integers mapped to 0.0."""
    return x - np.floor(x)


def _drill_half_d(params: DrillParams, t):
    """Displacement d(t) on (0, 1/2]; t = 0 evaluates the right-limit piece."""
    alpha = params.alpha
    q = np.asarray(params.q)
    big = len(q) - 1
    t = np.asarray(t, dtype=float)
    # piece k covers (q[big-k], q[big-k+1]]; t = 0 lands in the first
    # piece of positive length above 0.
    j_pos = np.searchsorted(q, t, side="left")
    j_zero = np.searchsorted(q, 0.0, side="right")
    j = np.where(t > 0.0, j_pos, j_zero)
    k = np.clip(big - j + 1, 1, big)
    arg = k * k - (k / alpha) * (k + 1.0 - 2.0 * t)
    arg = np.maximum(arg, 0.0)
    return alpha * (k - np.sqrt(arg))


def _drill_half(params: DrillParams, x):
    """One application of the half-map x + d(x) mod 1, extended by half-period."""
    x = np.asarray(x, dtype=float)
    t = np.where(x > 0.5, x - 0.5, x)
    return _mod1(x + _drill_half_d(params, t))


def _eval_map_array(spec: MapSpec, x):
    x = np.asarray(x, dtype=float)
    if spec.kind is MapKind.DOUBLING:
        return _mod1(2.0 * x)
    if spec.kind is MapKind.LOGISTIC:
        return spec.logistic_r * x * (1.0 - x)
    if spec.kind is MapKind.DRILL:
        params = drill_coefficients(spec.drill_lambda)
        return _drill_half(params, _drill_half(params, x))
    raise ParameterError(f"cannot evaluate map kind {spec.kind}")


def _check_support(spec: MapSpec, x) -> None:
    lo, hi = spec.support
    if np.any(np.asarray(x) < lo) or np.any(np.asarray(x) > hi):
        raise DomainError(f"state outside support [{lo}, {hi}]")


def eval_map(spec: MapSpec, x: float) -> float:
    """Unperturbed image of x under the map."""
    _check_support(spec, x)
    return float(_eval_map_array(spec, x))


def _tent(x):
    return 2.0 * np.arcsin(np.sqrt(x)) / np.pi


def _tent_inv(y):
    return np.sin(np.pi * y / 2.0) ** 2


def perturbed_step(spec: MapSpec, x: float, rng: np.random.Generator) -> float:
    """One data-generating step, including the anti-collapse noise."""
    _check_support(spec, x)
    kind = spec.perturbation.kind
    mag = spec.perturbation.magnitude
    if kind is PerturbationKind.NONE:
        return float(_eval_map_array(spec, x))
    if kind is PerturbationKind.BINARY_NOISE:
        y = float(_mod1(2.0 * x))
        for _ in range(REDRAW_CAP):
            eps = 1.0 if rng.random() < 0.5 else 0.0
            cand = y + mag * eps
            if 0.0 <= cand <= 1.0:
                return cand
        raise RetryCapError("binary-noise redraw cap exceeded")
    if kind is PerturbationKind.TENT_CONJUGATE_NOISE:
        y = float(_tent(x))
        for _ in range(REDRAW_CAP):
            eps = 1.0 if rng.random() < 0.5 else 0.0
            if x < 0.5:
                cand = 2.0 * y + mag * eps
            else:
                cand = 2.0 * (1.0 - y) + mag * (1.0 - eps)
            if 0.0 <= cand <= 1.0:
                return float(_tent_inv(cand))
        raise RetryCapError("tent-noise redraw cap exceeded")
    raise ParameterError(f"unknown perturbation {kind}")


def step_batch(spec: MapSpec, x: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Vectorized perturbed_step for a batch of independent states."""
    x = np.asarray(x, dtype=float)
    kind = spec.perturbation.kind
    mag = spec.perturbation.magnitude
    if kind is PerturbationKind.NONE:
        return _eval_map_array(spec, x)
    if kind is PerturbationKind.BINARY_NOISE:
        y = _mod1(2.0 * x)
        eps = (rng.random(x.shape) < 0.5).astype(float)
        cand = y + mag * eps
        bad = (cand < 0.0) | (cand > 1.0)
        tries = 0
        while np.any(bad):
            tries += 1
            if tries > REDRAW_CAP:
                raise RetryCapError("binary-noise redraw cap exceeded")
            eps = (rng.random(int(bad.sum())) < 0.5).astype(float)
            cand[bad] = y[bad] + mag * eps
            bad = (cand < 0.0) | (cand > 1.0)
        return cand
    if kind is PerturbationKind.TENT_CONJUGATE_NOISE:
        y = _tent(x)
        lower = x < 0.5
        eps = (rng.random(x.shape) < 0.5).astype(float)
        cand = np.where(lower, 2.0 * y + mag * eps, 2.0 * (1.0 - y) + mag * (1.0 - eps))
        bad = (cand < 0.0) | (cand > 1.0)
        tries = 0
        while np.any(bad):
            tries += 1
            if tries > REDRAW_CAP:
                raise RetryCapError("tent-noise redraw cap exceeded")
            eps = (rng.random(int(bad.sum())) < 0.5).astype(float)
            yb = y[bad]
            cand[bad] = np.where(
                lower[bad], 2.0 * yb + mag * eps, 2.0 * (1.0 - yb) + mag * (1.0 - eps)
            )
            bad = (cand < 0.0) | (cand > 1.0)
        return _tent_inv(cand)
    raise ParameterError(f"unknown perturbation {kind}")


def generate_trajectory(
    spec: MapSpec, x0: float, n: int, rng: np.random.Generator
) -> Trajectory:
    """Iterate the (perturbed) map n - 1 times starting from x0."""
    if n < 2:
        raise ParameterError("trajectory length must be >= 2")
    _check_support(spec, x0)
    states = np.empty(n, dtype=float)
    states[0] = x0
    x = float(x0)
    for i in range(1, n):
        x = perturbed_step(spec, x, rng)
        states[i] = x
    return Trajectory(states=states, spec=spec)


def states_of(data) -> np.ndarray:
    """Accept a Trajectory or a plain sequence of states."""
    if isinstance(data, Trajectory):
        return data.states
    return np.asarray(data, dtype=float)
