"""Pure-Python/numpy fallback for the hot kernels.

Same contracts as the compiled module ``kernels_cy``:

* ``pythagorean_triples(n)``    -- primitive (x, I, t), x >= 1, I >= 1, t <= n
* ``primitive_quadruple_count(n)`` -- unordered positive primitive quadruples
* ``path_count_spectrum(steps, dx, dt)`` -- d=1 path counts by total length

The spectrum kernel here uses Python big integers, so it has no overflow
ceiling; the compiled kernel guards its int64 range and the dispatcher falls
back to this module when the guard trips.
"""

from math import isqrt

import numpy as np

BACKEND = "python"


def pythagorean_triples(n: int) -> np.ndarray:
    """All primitive (x, I, t) with x^2 + I^2 = t^2, x >= 1, I >= 1, t <= n.

    Returns an (N, 3) int64 array sorted by (t, x).
    """
    rows = []
    for t in range(1, n + 1):
        t2 = t * t
        xs = np.arange(1, t)
        rem = t2 - xs * xs
        root = np.sqrt(rem).astype(np.int64)
        # floats are exact here (t <= ~1e7 keeps t^2 below 2^53)
        good = root * root == rem
        for x, i in zip(xs[good], root[good]):
            if i >= 1 and np.gcd(np.gcd(int(x), int(i)), t) == 1:
                rows.append((int(x), int(i), t))
    if not rows:
        return np.zeros((0, 3), dtype=np.int64)
    return np.array(sorted(rows, key=lambda r: (r[2], r[0])), dtype=np.int64)


def _mobius(n: int) -> np.ndarray:
    mu = np.ones(n + 1, dtype=np.int64)
    mu[0] = 0
    primes = []
    is_comp = np.zeros(n + 1, dtype=bool)
    for i in range(2, n + 1):
        if not is_comp[i]:
            primes.append(i)
            mu[i] = -1
        for p in primes:
            if i * p > n:
                break
            is_comp[i * p] = True
            if i % p == 0:
                mu[i * p] = 0
                break
            mu[i * p] = -mu[i]
    return mu


def _unordered_quadruples_cumulative(n: int) -> np.ndarray:
    """U[m] = #{0 < x <= y <= z, t <= m : x^2+y^2+z^2 = t^2}, not nec. primitive.

    Ordered counts come from a sum-of-two-squares representation table;
    unordered = ordered/6 + pairs/2 (no x=y=z solutions since 3 is not a
    square).
    """
    n2 = n * n
    r2 = np.zeros(n2 + 1, dtype=np.int64)
    for x in range(1, isqrt(n2 // 2) + 1):
        ys = np.arange(x, isqrt(n2 - x * x) + 1)
        s = x * x + ys * ys
        np.add.at(r2, s, np.where(ys == x, 1, 2))
    six_u = np.zeros(n + 1, dtype=np.float64)
    acc = 0.0
    for t in range(1, n + 1):
        t2 = t * t
        zs = np.arange(1, t)
        ordered = int(r2[t2 - zs * zs].sum()) if t > 1 else 0
        xs = np.arange(1, isqrt(t2 // 2) + 1)
        rem = t2 - 2 * xs * xs
        keep = rem >= 1
        r = np.sqrt(rem[keep]).astype(np.int64)
        pairs = int(np.sum(r * r == rem[keep]))
        acc += ordered / 6.0 + pairs / 2.0
        six_u[t] = acc
    return six_u


def primitive_quadruple_count(n: int) -> int:
    """Unordered positive primitive Pythagorean quadruples with t <= n."""
    if n < 1:
        return 0
    mu = _mobius(n)
    u = _unordered_quadruples_cumulative(n)
    total = 0.0
    for k in range(1, n + 1):
        if mu[k]:
            total += mu[k] * u[n // k]
    return int(round(total))


def path_count_spectrum(steps, dx: int, dt: int):
    """Counts of d=1 axis-step paths from 0 to (dx, dt), keyed by total length.

    ``steps`` is a sequence of (sx, st, length) integer triples.  Forward
    dynamic programming over time slices; exact big-integer counts.
    Returns a dict {I: count}.
    """
    if dt < 0:
        return {}
    if dt == 0:
        return {0: 1} if dx == 0 else {}
    # steps advance t by st >= 1, so walk the reachable time slices forward;
    # state per slice: (x, accumulated length) -> count
    by_time = {0: {(0, 0): 1}}
    for t in range(0, dt):
        layer = by_time.pop(t, None)
        if not layer:
            continue
        for (x, length), cnt in layer.items():
            for sx, st, sl in steps:
                t2 = t + st
                if t2 > dt:
                    continue
                x2 = x + sx
                if abs(x2 - dx) > dt - t2:  # unreachable: per-step speed <= 1
                    continue
                dst = by_time.setdefault(t2, {})
                key = (x2, length + sl)
                dst[key] = dst.get(key, 0) + cnt
    out = {}
    for (x, length), cnt in by_time.get(dt, {}).items():
        if x == dx:
            out[length] = out.get(length, 0) + cnt
    return out
