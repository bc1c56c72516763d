"""Parity between the compiled kernel core and the pure-Python fallback."""

import numpy as np
import pytest

from latticeprop import _core
from latticeprop._core import kernels_py

compiled = pytest.mark.skipif(_core.BACKEND != "cython",
                              reason="compiled core not built")


def _cy():
    from latticeprop._core import kernels_cy
    return kernels_cy


@compiled
@pytest.mark.parametrize("n", [1, 5, 60, 150])
def test_triples_parity(n):
    a = _cy().pythagorean_triples(n)
    b = kernels_py.pythagorean_triples(n)
    assert np.array_equal(np.sort(a.tolist()), np.sort(b.tolist()))


@compiled
@pytest.mark.parametrize("n", [1, 10, 100, 400])
def test_quadruple_count_parity(n):
    assert _cy().primitive_quadruple_count(n) == kernels_py.primitive_quadruple_count(n)


@compiled
def test_spectrum_parity():
    steps = [(0, 1, 1), (1, 1, 0), (-1, 1, 0)]
    for dx in (-3, 0, 2):
        for dt in (0, 1, 4, 8):
            assert _cy().path_count_spectrum(steps, dx, dt) == \
                kernels_py.path_count_spectrum(steps, dx, dt)
    rich = [(0, 1, 1), (1, 1, 0), (-1, 1, 0), (3, 5, 4), (-3, 5, 4), (4, 5, 3), (-4, 5, 3)]
    assert _cy().path_count_spectrum(rich, 1, 10) == \
        kernels_py.path_count_spectrum(rich, 1, 10)


def _central_trinomial(n):
    # {-1, 0, +1} walks of length n returning to 0
    import math
    return sum(math.factorial(n) // (math.factorial(j) ** 2 * math.factorial(n - 2 * j))
               for j in range(n // 2 + 1))


@compiled
def test_spectrum_overflow_guard_falls_back():
    steps = [(0, 1, 1), (1, 1, 0), (-1, 1, 0)]
    with pytest.raises(OverflowError):
        _cy().path_count_spectrum(steps, 0, 60)
    # dispatcher silently falls back to the big-integer kernel
    out = _core.path_count_spectrum(steps, 0, 60)
    assert sum(out.values()) == _central_trinomial(60)


def test_pure_spectrum_bigint():
    steps = [(0, 1, 1), (1, 1, 0), (-1, 1, 0)]
    out = kernels_py.path_count_spectrum(steps, 0, 45)
    total = sum(out.values())
    assert total == _central_trinomial(45)
    assert total > 2 ** 63  # must be exact beyond int64


def test_quadruple_count_brute_force_small():
    from math import gcd, isqrt
    def brute(n):
        cnt = 0
        for t in range(1, n + 1):
            for x in range(1, t + 1):
                for y in range(x, t + 1):
                    r = t * t - x * x - y * y
                    if r < y * y:
                        break
                    z = isqrt(r)
                    if z * z == r and gcd(gcd(x, y), gcd(z, t)) == 1:
                        cnt += 1
        return cnt
    for n in (10, 50, 100):
        assert _core.primitive_quadruple_count(n) == brute(n)
