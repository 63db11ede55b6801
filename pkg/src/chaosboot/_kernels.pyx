# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: segmented-spline evaluation and orbit Birkhoff sums.

Kept in lockstep with `_kernels_py.py`; any change here needs the matching
change there.
"""

import numpy as np


cdef inline double _eval_one(
    double x,
    const double[::1] disc,
    const long long[::1] knot_ptr,
    const long long[::1] coef_ptr,
    const double[::1] knots,
    const double[:, ::1] coefs,
    double lo,
    double hi,
    double nudge,
) noexcept nogil:
    cdef Py_ssize_t nseg = knot_ptr.shape[0] - 1
    cdef Py_ssize_t j = 0
    cdef Py_ssize_t k0, k1, ilo, ihi, mid, i, row
    cdef double t, y
    while j < nseg - 1 and x > disc[j]:
        j += 1
    k0 = knot_ptr[j]
    k1 = knot_ptr[j + 1]
    # largest i with knots[k0 + i] <= x, clamped to a real interval
    ilo = k0
    ihi = k1
    while ilo < ihi:
        mid = (ilo + ihi) // 2
        if knots[mid] <= x:
            ilo = mid + 1
        else:
            ihi = mid
    i = ilo - 1 - k0
    if i < 0:
        i = 0
    if i > k1 - k0 - 2:
        i = k1 - k0 - 2
    row = coef_ptr[j] + i
    t = x - knots[k0 + i]
    y = ((coefs[row, 3] * t + coefs[row, 2]) * t + coefs[row, 1]) * t + coefs[row, 0]
    if y <= lo:
        y = lo + nudge
    elif y >= hi:
        y = hi - nudge
    return y


def eval_spline(x, disc, knot_ptr, coef_ptr, knots, coefs, double lo, double hi,
                double nudge):
    x = np.ascontiguousarray(x, dtype=np.float64)
    cdef double[::1] xv = x
    cdef const double[::1] dv = np.ascontiguousarray(disc, dtype=np.float64)
    cdef const long long[::1] kp = np.ascontiguousarray(knot_ptr, dtype=np.int64)
    cdef const long long[::1] cp = np.ascontiguousarray(coef_ptr, dtype=np.int64)
    cdef const double[::1] kv = np.ascontiguousarray(knots, dtype=np.float64)
    cdef const double[:, ::1] cf = np.ascontiguousarray(coefs, dtype=np.float64)
    out = np.empty(x.shape[0], dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t b
    with nogil:
        for b in range(xv.shape[0]):
            ov[b] = _eval_one(xv[b], dv, kp, cp, kv, cf, lo, hi, nudge)
    return out


def pivot_sums(x0, Py_ssize_t n, int power, disc, knot_ptr, coef_ptr, knots, coefs,
               double lo, double hi, double nudge):
    x0 = np.ascontiguousarray(x0, dtype=np.float64)
    cdef const double[::1] x0v = x0
    cdef const double[::1] dv = np.ascontiguousarray(disc, dtype=np.float64)
    cdef const long long[::1] kp = np.ascontiguousarray(knot_ptr, dtype=np.int64)
    cdef const long long[::1] cp = np.ascontiguousarray(coef_ptr, dtype=np.int64)
    cdef const double[::1] kv = np.ascontiguousarray(knots, dtype=np.float64)
    cdef const double[:, ::1] cf = np.ascontiguousarray(coefs, dtype=np.float64)
    sums = np.empty(x0.shape[0], dtype=np.float64)
    cdef double[::1] sv = sums
    cdef Py_ssize_t b, k
    cdef double x, total, comp, hx, y, t, x2
    with nogil:
        for b in range(x0v.shape[0]):
            x = x0v[b]
            total = 0.0
            comp = 0.0
            for k in range(n):
                if power == 1:
                    hx = x
                elif power == 2:
                    hx = x * x
                else:
                    x2 = x * x
                    hx = x2 * x2
                y = hx - comp
                t = total + y
                comp = (t - total) - y
                total = t
                if k < n - 1:
                    x = _eval_one(x, dv, kp, cp, kv, cf, lo, hi, nudge)
            sv[b] = total
    return sums
