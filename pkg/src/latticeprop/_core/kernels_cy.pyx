# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. Contracts mirror kernels_py; see that module."""

from libc.math cimport sqrt, log

import numpy as np
cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"


cdef long long _gcd(long long a, long long b) noexcept nogil:
    cdef long long t
    while b:
        t = a % b
        a = b
        b = t
    return a


cdef long long _isqrt(long long v) noexcept nogil:
    cdef long long r = <long long>sqrt(<double>v)
    while r * r > v:
        r -= 1
    while (r + 1) * (r + 1) <= v:
        r += 1
    return r


def pythagorean_triples(int n):
    """All primitive (x, I, t) with x^2 + I^2 = t^2, x >= 1, I >= 1, t <= n."""
    cdef list rows = []
    cdef long long t, t2, x, rem, i
    for t in range(1, n + 1):
        t2 = t * t
        for x in range(1, t):
            rem = t2 - x * x
            i = _isqrt(rem)
            if i >= 1 and i * i == rem and _gcd(_gcd(x, i), t) == 1:
                rows.append((x, i, t))
    if not rows:
        return np.zeros((0, 3), dtype=np.int64)
    return np.array(rows, dtype=np.int64)


def primitive_quadruple_count(int n):
    """Unordered positive primitive Pythagorean quadruples with t <= n."""
    if n < 1:
        return 0
    cdef long long n2 = <long long>n * n
    cdef cnp.ndarray[cnp.int64_t, ndim=1] r2 = np.zeros(n2 + 1, dtype=np.int64)
    cdef long long[::1] r2v = r2
    cdef long long x, y, s, t, t2, z, rem, r
    for x in range(1, _isqrt(n2 // 2) + 1):
        for y in range(x, _isqrt(n2 - x * x) + 1):
            s = x * x + y * y
            r2v[s] += 1 if y == x else 2
    # cumulative unordered (x<=y<=z) counts: ordered/6 + equal-pair/2
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ucum = np.zeros(n + 1, dtype=np.float64)
    cdef double acc = 0.0
    cdef long long ordered, pairs
    for t in range(1, n + 1):
        t2 = t * t
        ordered = 0
        for z in range(1, t):
            ordered += r2v[t2 - z * z]
        pairs = 0
        for x in range(1, _isqrt(t2 // 2) + 1):
            rem = t2 - 2 * x * x
            if rem >= 1:
                r = _isqrt(rem)
                if r * r == rem:
                    pairs += 1
        acc += ordered / 6.0 + pairs / 2.0
        ucum[t] = acc
    # Mobius sieve
    cdef cnp.ndarray[cnp.int64_t, ndim=1] mu = np.ones(n + 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] comp = np.zeros(n + 1, dtype=np.uint8)
    cdef list primes = []
    cdef long long i2, p
    mu[0] = 0
    for i2 in range(2, n + 1):
        if not comp[i2]:
            primes.append(i2)
            mu[i2] = -1
        for p in primes:
            if i2 * p > n:
                break
            comp[i2 * p] = 1
            if i2 % p == 0:
                mu[i2 * p] = 0
                break
            mu[i2 * p] = -mu[i2]
    cdef double total = 0.0
    cdef long long k
    for k in range(1, n + 1):
        if mu[k]:
            total += mu[k] * ucum[n // k]
    return int(round(total))


def path_count_spectrum(steps, long long dx, long long dt):
    """d=1 axis-step path counts by total length; int64 range guarded.

    Raises OverflowError when dt * log(#steps) could exceed int64; the
    dispatcher falls back to the big-integer Python kernel.
    """
    cdef int ns = len(steps)
    if dt < 0:
        return {}
    if dt == 0:
        return {0: 1} if dx == 0 else {}
    if ns > 1 and dt * log(<double>ns) > 62.0 * 0.6931471805599453:
        raise OverflowError("path counts may exceed int64")
    cdef long long xmax = dt, lmax = 0
    cdef long long sx, st, sl
    for sx, st, sl in steps:
        if sl * (dt // st if st else 1) > lmax:
            lmax = sl * (dt // st)
    cdef cnp.ndarray[cnp.int64_t, ndim=3] table = np.zeros(
        (dt + 1, 2 * dt + 1, lmax + 1), dtype=np.int64)
    cdef long long[:, :, ::1] tv = table
    tv[0, dt, 0] = 1  # x offset by +dt
    cdef long long t, x, li, t2, x2
    cdef long long[3] s
    cdef list stl = [tuple(map(int, s0)) for s0 in steps]
    for t in range(0, dt):
        for x in range(0, 2 * dt + 1):
            for li in range(0, lmax + 1):
                if tv[t, x, li] == 0:
                    continue
                for sx, st, sl in stl:
                    t2 = t + st
                    if t2 > dt:
                        continue
                    x2 = x + sx
                    if x2 < 0 or x2 > 2 * dt:
                        continue
                    if li + sl > lmax:
                        continue
                    tv[t2, x2, li + sl] += tv[t, x, li]
    cdef dict out = {}
    if dx + dt < 0 or dx + dt > 2 * dt:
        return out
    for li in range(0, lmax + 1):
        if tv[dt, dx + dt, li]:
            out[li] = int(tv[dt, dx + dt, li])
    return out
