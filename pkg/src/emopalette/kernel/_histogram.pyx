# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled histogram kernel.

Must stay operation-for-operation identical to _fallback.py; the build uses
-ffp-contract=off so double arithmetic matches CPython bit-for-bit.
"""

from libc.math cimport acos, fmod, sqrt, M_PI

import numpy as np

cdef double RAD2DEG = 180.0 / M_PI


cdef inline double _eval_mf(double x, double shape, double a, double b,
                            double c, double d, double cyclic,
                            double period) nogil:
    cdef double r
    if cyclic != 0.0:
        r = fmod(x - a, period)
        if r < 0.0:
            r += period
        x = a + r
    if shape == 3.0:
        if x < a or x > c:
            return 0.0
        if x == b:
            return 1.0
        if x < b:
            return (x - a) / (b - a)
        return (c - x) / (c - b)
    if x < a or x > d:
        return 0.0
    if b <= x <= c:
        return 1.0
    if x < b:
        return (x - a) / (b - a)
    return (d - x) / (d - c)


cdef inline int _classify(double x, const double[::1] params, int off) nogil:
    cdef int n = <int>params[off]
    cdef double period = params[off + 1]
    cdef int base = off + 2
    cdef int best = 0
    cdef int t, p
    cdef double mu
    cdef double best_mu = _eval_mf(x, params[base], params[base + 1],
                                   params[base + 2], params[base + 3],
                                   params[base + 4], params[base + 5], period)
    for t in range(1, n):
        p = base + 6 * t
        mu = _eval_mf(x, params[p], params[p + 1], params[p + 2],
                      params[p + 3], params[p + 4], params[p + 5], period)
        if mu > best_mu:
            best = t
            best_mu = mu
    return best


def histogram(const unsigned char[:, ::1] rgb, const double[::1] params,
              int n_bins):
    """Count fuzzy colors over an (n, 3) uint8 pixel array."""
    counts_arr = np.zeros(n_bins, dtype=np.uint32)
    cdef unsigned int[::1] counts = counts_arr
    cdef int n_hue = <int>params[0]
    cdef int sat_off = 2 + 6 * n_hue
    cdef int n_sat = <int>params[sat_off]
    cdef int int_off = sat_off + 2 + 6 * n_sat
    cdef Py_ssize_t k, n_px = rgb.shape[0]
    cdef int r, g, b, total, mn, hi, si, ii
    cdef double i, s, h, num, den, c, theta

    with nogil:
        for k in range(n_px):
            r = rgb[k, 0]
            g = rgb[k, 1]
            b = rgb[k, 2]
            total = r + g + b
            i = total / 3.0
            if total == 0 or (r == g and g == b):
                h = 0.0
                s = 0.0
            else:
                mn = r if r <= g else g
                if b < mn:
                    mn = b
                s = 100.0 * (1.0 - 3.0 * mn / <double>total)
                num = 0.5 * ((r - g) + (r - b))
                den = sqrt(<double>((r - g) * (r - g) + (r - b) * (g - b)))
                c = num / den
                if c > 1.0:
                    c = 1.0
                elif c < -1.0:
                    c = -1.0
                theta = acos(c) * RAD2DEG
                h = theta if b <= g else 360.0 - theta

            hi = _classify(h, params, 0)
            si = _classify(s, params, sat_off)
            ii = _classify(i, params, int_off)
            counts[(ii * n_sat + si) * n_hue + hi] += 1
    return counts_arr
