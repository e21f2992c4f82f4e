"""Pure-Python histogram kernel.

Mirrors _histogram.pyx operation-for-operation so that both backends produce
bit-identical counts; any change here must be ported to the .pyx file.
"""

from __future__ import annotations

import math

import numpy as np

RAD2DEG = 180.0 / math.pi


def _eval_mf(x: float, shape: float, a: float, b: float, c: float, d: float,
             cyclic: float, period: float) -> float:
    if cyclic != 0.0:
        x = a + ((x - a) % period)
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


def _classify(x: float, params, off: int) -> tuple[int, int]:
    """Argmax term index for variable at params[off:]; returns (index, next_off)."""
    n = int(params[off])
    period = params[off + 1]
    base = off + 2
    best = 0
    best_mu = _eval_mf(x, params[base], params[base + 1], params[base + 2],
                       params[base + 3], params[base + 4], params[base + 5], period)
    for t in range(1, n):
        p = base + 6 * t
        mu = _eval_mf(x, params[p], params[p + 1], params[p + 2],
                      params[p + 3], params[p + 4], params[p + 5], period)
        if mu > best_mu:
            best = t
            best_mu = mu
    return best, base + 6 * n


def histogram(rgb: np.ndarray, params: np.ndarray, n_bins: int) -> np.ndarray:
    """Count fuzzy colors over an (n, 3) uint8 pixel array."""
    counts = np.zeros(n_bins, dtype=np.uint32)
    flat = rgb.reshape(-1, 3)
    n_hue = int(params[0])
    sat_off = 2 + 6 * n_hue
    n_sat = int(params[sat_off])
    int_off = sat_off + 2 + 6 * n_sat

    for k in range(flat.shape[0]):
        r = int(flat[k, 0])
        g = int(flat[k, 1])
        b = int(flat[k, 2])
        total = r + g + b
        i = total / 3.0
        if total == 0 or (r == g and g == b):
            h = 0.0
            s = 0.0
        else:
            mn = r if r <= g else g
            if b < mn:
                mn = b
            s = 100.0 * (1.0 - 3.0 * mn / total)
            num = 0.5 * ((r - g) + (r - b))
            den = math.sqrt((r - g) * (r - g) + (r - b) * (g - b))
            c = num / den
            if c > 1.0:
                c = 1.0
            elif c < -1.0:
                c = -1.0
            theta = math.acos(c) * RAD2DEG
            h = theta if b <= g else 360.0 - theta

        hi, _ = _classify(h, params, 0)
        si, _ = _classify(s, params, sat_off)
        ii, _ = _classify(i, params, int_off)
        counts[(ii * n_sat + si) * n_hue + hi] += 1
    return counts
