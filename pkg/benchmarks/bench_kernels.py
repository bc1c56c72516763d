"""Benchmark: compiled kernel core vs the pure-Python fallback.

Run after an editable install:

    python benchmarks/bench_kernels.py

The three kernels are the hot inner loops of the library: primitive triple
enumeration (axis generation), primitive quadruple counting (density law),
and the d=1 path-count dynamic program (spectrum oracle).
"""

import time

from latticeprop._core import kernels_py

try:
    from latticeprop._core import kernels_cy
except ImportError:
    kernels_cy = None

RICH_STEPS = [(0, 1, 1), (1, 1, 0), (-1, 1, 0),
              (3, 5, 4), (-3, 5, 4), (4, 5, 3), (-4, 5, 3)]

CASES = [
    ("pythagorean_triples(n=3000)",
     lambda k: k.pythagorean_triples(3000)),
    ("primitive_quadruple_count(n=1200)",
     lambda k: k.primitive_quadruple_count(1200)),
    ("path_count_spectrum(7 axes, t=18)",
     lambda k: k.path_count_spectrum(RICH_STEPS, 1, 18)),
]


def timeit(fn, kernel, repeat=3):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(kernel)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    print(f"{'kernel':40s} {'pure (s)':>10s} {'cython (s)':>10s} {'speedup':>8s}")
    for name, fn in CASES:
        t_py, r_py = timeit(fn, kernels_py)
        if kernels_cy is None:
            print(f"{name:40s} {t_py:10.4f} {'n/a':>10s} {'n/a':>8s}")
            continue
        t_cy, r_cy = timeit(fn, kernels_cy)
        same = _equal(r_py, r_cy)
        ratio = t_py / t_cy if t_cy > 0 else float("inf")
        flag = "" if same else "  RESULTS DIFFER"
        print(f"{name:40s} {t_py:10.4f} {t_cy:10.4f} {ratio:7.1f}x{flag}")


def _equal(a, b):
    try:
        import numpy as np
        if isinstance(a, np.ndarray):
            return np.array_equal(np.sort(a.tolist()), np.sort(b.tolist()))
    except ImportError:
        pass
    return a == b


if __name__ == "__main__":
    main()
