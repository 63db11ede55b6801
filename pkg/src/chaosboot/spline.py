"""Piecewise spline estimation of the transformation from trajectory data.

A map estimate is one spline per discontinuity-delimited segment.  Cubic
segments come in three boundary flavors (natural, FMM, periodic); a linear
kind is kept for comparison.  Evaluation clamps images that escape the
support back to just inside the nearest boundary.
"""

from __future__ import annotations

import enum
import io
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .errors import DomainError, InsufficientDataError, ParameterError
from .maps import DEFAULT_NOISE, Trajectory, states_of


class SplineKind(enum.Enum):
    NATURAL_CUBIC = "natural"
    FMM_CUBIC = "fmm"
    PERIODIC_CUBIC = "periodic"
    LINEAR = "linear"


# minimum points accepted by fit_spline itself
_FIT_MIN = {
    SplineKind.NATURAL_CUBIC: 3,
    SplineKind.FMM_CUBIC: 4,
    SplineKind.PERIODIC_CUBIC: 3,
    SplineKind.LINEAR: 2,
}
# per-segment minimum when fitting a map estimate from a trajectory
_SEGMENT_MIN = {
    SplineKind.NATURAL_CUBIC: 4,
    SplineKind.FMM_CUBIC: 4,
    SplineKind.PERIODIC_CUBIC: 4,
    SplineKind.LINEAR: 2,
}


@dataclass(frozen=True)
class SplineSegment:
    knots: np.ndarray  # strictly increasing, length m
    coefs: np.ndarray  # (m - 1, 4) rows a, b, c, d on [knot_i, knot_{i+1}]


@dataclass(frozen=True)
class SplineEstimate:
    kind: SplineKind
    segments: tuple[SplineSegment, ...]
    breakpoints: tuple[float, ...]  # right-closed segment boundaries
    support: tuple[float, float]
    nudge: float = DEFAULT_NOISE


def _second_derivatives(x: np.ndarray, y: np.ndarray, kind: SplineKind) -> np.ndarray:
    """Solve the smoothness system for the knot second derivatives."""
    n = len(x)
    h = np.diff(x)
    slope = np.diff(y) / h
    if kind is SplineKind.PERIODIC_CUBIC:
        if abs(y[0] - y[-1]) > 1e-8 * max(1.0, abs(y[0])):
            raise ParameterError("periodic spline needs matching end values")
        m = n - 1  # unknowns sigma_0..sigma_{m-1}, sigma_{n-1} = sigma_0
        a = np.zeros((m, m))
        rhs = np.zeros(m)
        for i in range(m):
            hp = h[i - 1] if i > 0 else h[-1]
            hc = h[i]
            sp = slope[i - 1] if i > 0 else slope[-1]
            a[i, (i - 1) % m] += hp
            a[i, i] += 2.0 * (hp + hc)
            a[i, (i + 1) % m] += hc
            rhs[i] = 6.0 * (slope[i] - sp)
        sig = np.linalg.solve(a, rhs)
        return np.append(sig, sig[0])

    # natural / FMM: tridiagonal in sigma_0..sigma_{n-1}
    diag = np.ones(n)
    lower = np.zeros(n)
    upper = np.zeros(n)
    rhs = np.zeros(n)
    for i in range(1, n - 1):
        lower[i] = h[i - 1]
        diag[i] = 2.0 * (h[i - 1] + h[i])
        upper[i] = h[i]
        rhs[i] = 6.0 * (slope[i] - slope[i - 1])
    if kind is SplineKind.NATURAL_CUBIC:
        diag[0] = diag[-1] = 1.0
        upper[0] = lower[-1] = 0.0
        rhs[0] = rhs[-1] = 0.0
    else:  # FMM: third derivative at each end matches the end cubic
        dd_left = _third_divided_difference(x[:4], y[:4])
        dd_right = _third_divided_difference(x[-4:], y[-4:])
        diag[0] = -1.0
        upper[0] = 1.0
        rhs[0] = 6.0 * h[0] * dd_left
        lower[-1] = -1.0
        diag[-1] = 1.0
        rhs[-1] = 6.0 * h[-1] * dd_right
    ab = np.zeros((3, n))
    ab[0, 1:] = upper[:-1]
    ab[1] = diag
    ab[2, :-1] = lower[1:]
    return solve_banded((1, 1), ab, rhs)


def _third_divided_difference(x: np.ndarray, y: np.ndarray) -> float:
    d = y.astype(float).copy()
    for level in range(1, 4):
        d = (d[1:] - d[:-1]) / (x[level:] - x[: len(x) - level])
    return float(d[0])


def fit_spline(knots, values, kind: SplineKind) -> SplineEstimate:
    """Interpolating spline through (knots, values) with the given end rule."""
    x = np.asarray(knots, dtype=float)
    y = np.asarray(values, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ParameterError("knots and values must be equal-length 1-d arrays")
    if len(x) < _FIT_MIN[kind]:
        raise InsufficientDataError(
            f"{kind.value} spline needs >= {_FIT_MIN[kind]} points, got {len(x)}"
        )
    if np.any(np.diff(x) <= 0.0):
        raise ParameterError("knots must be strictly increasing")
    seg = SplineSegment(knots=x, coefs=_coefficients(x, y, kind))
    return SplineEstimate(
        kind=kind,
        segments=(seg,),
        breakpoints=(),
        support=(float(x[0]), float(x[-1])),
    )


def _coefficients(x: np.ndarray, y: np.ndarray, kind: SplineKind) -> np.ndarray:
    h = np.diff(x)
    slope = np.diff(y) / h
    m = len(x) - 1
    coefs = np.zeros((m, 4))
    if kind is SplineKind.LINEAR:
        coefs[:, 0] = y[:-1]
        coefs[:, 1] = slope
        return coefs
    sig = _second_derivatives(x, y, kind)
    coefs[:, 0] = y[:-1]
    coefs[:, 1] = slope - h * (2.0 * sig[:-1] + sig[1:]) / 6.0
    coefs[:, 2] = sig[:-1] / 2.0
    coefs[:, 3] = (sig[1:] - sig[:-1]) / (6.0 * h)
    return coefs


def build_map_estimate(
    traj,
    discontinuities,
    kind: SplineKind,
    support: tuple[float, float] | None = None,
) -> SplineEstimate:
    """Fit one spline per segment to the (x_i, x_{i+1}) pairs of a trajectory."""
    states = states_of(traj)
    if support is None:
        if isinstance(traj, Trajectory) and traj.spec is not None:
            support = traj.spec.support
        else:
            support = (0.0, 1.0)
    if len(states) < 2:
        raise InsufficientDataError("trajectory too short to form pairs")
    disc = tuple(float(b) for b in discontinuities)
    if any(d <= support[0] or d >= support[1] for d in disc):
        raise ParameterError("breakpoints must lie strictly inside the support")

    # duplicate abscissae keep the first-seen image value
    seen: dict[float, float] = {}
    for xi, yi in zip(states[:-1], states[1:]):
        seen.setdefault(float(xi), float(yi))
    xs = np.array(sorted(seen))
    ys = np.array([seen[v] for v in xs])

    edges = np.array(disc)
    seg_idx = np.searchsorted(edges, xs, side="left")  # breakpoint -> left segment
    need = _SEGMENT_MIN[kind]
    segments = []
    for j in range(len(disc) + 1):
        mask = seg_idx == j
        count = int(mask.sum())
        if count < need:
            raise InsufficientDataError(
                f"segment {j} has {count} points, needs >= {need} for {kind.value}"
            )
        fitted = fit_spline(xs[mask], ys[mask], kind)
        segments.append(fitted.segments[0])
    return SplineEstimate(
        kind=kind,
        segments=tuple(segments),
        breakpoints=disc,
        support=(float(support[0]), float(support[1])),
    )


def kernel_arrays(est: SplineEstimate):
    """Flatten an estimate into the arrays consumed by the evaluation kernels."""
    disc = np.asarray(est.breakpoints, dtype=float)
    knot_ptr = np.zeros(len(est.segments) + 1, dtype=np.int64)
    coef_ptr = np.zeros(len(est.segments) + 1, dtype=np.int64)
    knots = []
    coefs = []
    for j, seg in enumerate(est.segments):
        knot_ptr[j + 1] = knot_ptr[j] + len(seg.knots)
        coef_ptr[j + 1] = coef_ptr[j] + len(seg.coefs)
        knots.append(seg.knots)
        coefs.append(seg.coefs)
    return (
        disc,
        knot_ptr,
        coef_ptr,
        np.ascontiguousarray(np.concatenate(knots)),
        np.ascontiguousarray(np.vstack(coefs)),
        est.support[0],
        est.support[1],
        est.nudge,
    )


def eval_batch(est: SplineEstimate, x: np.ndarray) -> np.ndarray:
    """Vectorized eval_estimated_map over an array of in-support states."""
    from . import _kernels_py

    x = np.asarray(x, dtype=float)
    lo, hi = est.support
    if np.any(x < lo) or np.any(x > hi):
        raise DomainError(f"state outside support [{lo}, {hi}]")
    disc, kp, cp, knots, coefs, lo, hi, nudge = kernel_arrays(est)
    return _kernels_py.eval_spline(x, disc, kp, cp, knots, coefs, lo, hi, nudge)


def eval_unclamped(est: SplineEstimate, x) -> np.ndarray:
    """Raw spline values without the support clamp (diagnostics, tests)."""
    x = np.asarray(x, dtype=float)
    disc, kp, cp, knots, coefs, _lo, _hi, _n = kernel_arrays(est)
    from . import _kernels_py

    return _kernels_py.eval_spline(
        x, disc, kp, cp, knots, coefs, -np.inf, np.inf, 0.0
    )


def eval_estimated_map(est: SplineEstimate, x: float) -> float:
    """Estimated image of x, clamped strictly inside the open support."""
    return float(eval_batch(est, np.array([x]))[0])


def spline_to_csv(est: SplineEstimate) -> str:
    """Coefficient dump, one row per polynomial piece."""
    buf = io.StringIO()
    buf.write("segment,knot_lo,knot_hi,a,b,c,d\n")
    for j, seg in enumerate(est.segments):
        for i in range(len(seg.coefs)):
            a, b, c, d = (float(v) for v in seg.coefs[i])
            lo, hi = float(seg.knots[i]), float(seg.knots[i + 1])
            buf.write(f"{j},{lo!r},{hi!r},{a!r},{b!r},{c!r},{d!r}\n")
    return buf.getvalue()
