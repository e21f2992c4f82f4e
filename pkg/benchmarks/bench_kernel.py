"""Benchmark the compiled histogram kernel against the pure-Python fallback.

Run: python benchmarks/bench_kernel.py [n_images]
"""

import sys
import time

import numpy as np

from emopalette.colorspace import FuzzyColorSpace
from emopalette.kernel import _fallback, pack_space

try:
    from emopalette.kernel import _histogram as compiled
except ImportError:
    compiled = None


def run(backend, images, params, n_bins):
    start = time.perf_counter()
    totals = np.zeros(n_bins, dtype=np.uint64)
    for img in images:
        totals += backend.histogram(img, params, n_bins)
    return time.perf_counter() - start, totals


def main():
    n_images = int(sys.argv[1]) if len(sys.argv) > 1 else 20
    space = FuzzyColorSpace.from_spec()
    params, n_bins = pack_space(space)
    rng = np.random.default_rng(0)
    images = [
        np.ascontiguousarray(rng.integers(0, 256, size=(40000, 3), dtype=np.uint8))
        for _ in range(n_images)
    ]
    pixels = n_images * 40000

    py_time, py_totals = run(_fallback, images, params, n_bins)
    print(f"pure python : {py_time:8.3f}s  ({pixels / py_time / 1e6:6.2f} Mpx/s)")

    if compiled is None:
        print("compiled    : not built")
        return
    c_time, c_totals = run(compiled, images, params, n_bins)
    print(f"compiled    : {c_time:8.3f}s  ({pixels / c_time / 1e6:6.2f} Mpx/s)")
    print(f"speedup     : {py_time / c_time:8.1f}x")
    print(f"bit-identical counts: {np.array_equal(py_totals, c_totals)}")


if __name__ == "__main__":
    main()
