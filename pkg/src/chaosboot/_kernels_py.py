"""Pure-numpy implementations of the hot kernels.

These mirror `_kernels.pyx` operation for operation (same Horner form, same
Kahan accumulation) so that the compiled and fallback lanes agree to within
compiler rounding.  The compiled lane is selected in `kernels.py` when the
extension built; set CHAOSBOOT_PURE=1 to force this lane.
"""

from __future__ import annotations

import numpy as np


def _power(x: np.ndarray, power: int) -> np.ndarray:
    if power == 1:
        return x
    if power == 2:
        return x * x
    if power == 4:
        x2 = x * x
        return x2 * x2
    return x**power


def eval_spline(x, disc, knot_ptr, coef_ptr, knots, coefs, lo, hi, nudge):
    """Evaluate a segmented spline at each point of x, with support clamping."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    if len(disc):
        seg = np.searchsorted(disc, x, side="left")
    else:
        seg = np.zeros(x.shape, dtype=np.int64)
    for j in range(len(knot_ptr) - 1):
        mask = seg == j
        if not np.any(mask):
            continue
        xj = x[mask]
        kk = knots[knot_ptr[j] : knot_ptr[j + 1]]
        i = np.searchsorted(kk, xj, side="right") - 1
        i = np.clip(i, 0, len(kk) - 2)  # end polynomials extrapolate
        row = coef_ptr[j] + i
        t = xj - kk[i]
        out[mask] = (
            (coefs[row, 3] * t + coefs[row, 2]) * t + coefs[row, 1]
        ) * t + coefs[row, 0]
    out = np.where(out <= lo, lo + nudge, out)
    out = np.where(out >= hi, hi - nudge, out)
    return out


def pivot_sums(x0, n, power, disc, knot_ptr, coef_ptr, knots, coefs, lo, hi, nudge):
    """Birkhoff sums of x^power along n-step orbits of the estimated map.

    One orbit per entry of x0; orbits are iterated without stochastic
    perturbation, clamping is the only intervention.
    """
    x = np.array(x0, dtype=float)
    total = np.zeros_like(x)
    comp = np.zeros_like(x)
    for k in range(n):
        hx = _power(x, power)
        y = hx - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if k < n - 1:
            x = eval_spline(x, disc, knot_ptr, coef_ptr, knots, coefs, lo, hi, nudge)
    return total
