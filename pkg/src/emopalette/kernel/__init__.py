"""Backend selection for the per-pixel fuzzification kernel.

The compiled Cython extension is used when available; set
EMOPALETTE_PURE_PYTHON=1 to force the pure-Python fallback. Both backends
produce bit-identical histograms.
"""

from __future__ import annotations

import os
from weakref import WeakKeyDictionary

import numpy as np

from ..fuzzy import TRIANGULAR, LinguisticVariable

if os.environ.get("EMOPALETTE_PURE_PYTHON"):
    from . import _fallback as _impl

    BACKEND = "python"
else:
    try:
        from . import _histogram as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        from . import _fallback as _impl  # type: ignore[no-redef]

        BACKEND = "python"

_pack_cache: WeakKeyDictionary = WeakKeyDictionary()


def _pack_variable(var: LinguisticVariable, out: list[float]) -> None:
    out.append(float(len(var.terms)))
    out.append(float(var.domain[1]) - float(var.domain[0]))
    for _, mf in var.terms:
        pts = mf.points
        if mf.shape == TRIANGULAR:
            a, b, c = pts
            d = c
            shape = 3.0
        else:
            a, b, c, d = pts
            shape = 4.0
        out.extend((shape, a, b, c, d, 1.0 if mf.cyclic else 0.0))


def pack_space(space) -> tuple[np.ndarray, int]:
    """Flatten a FuzzyColorSpace into the kernel parameter vector."""
    cached = _pack_cache.get(space)
    if cached is not None:
        return cached
    out: list[float] = []
    for var in (space.hue, space.saturation, space.intensity):
        _pack_variable(var, out)
    params = np.asarray(out, dtype=np.float64)
    n_bins = len(space)
    _pack_cache[space] = (params, n_bins)
    return params, n_bins


def histogram_counts(rgb: np.ndarray, space) -> np.ndarray:
    """Fuzzy color histogram (uint32 counts, one bin per color index)."""
    params, n_bins = pack_space(space)
    flat = np.ascontiguousarray(rgb.reshape(-1, 3), dtype=np.uint8)
    return _impl.histogram(flat, params, n_bins)


def backend_name() -> str:
    return BACKEND
