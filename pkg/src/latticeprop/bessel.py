"""Bessel J, Y and Hankel-of-second-kind values for small orders.

Power series below |z| = 12, Hankel asymptotic expansion beyond, with an
overlap window used by the cross-check tests.  Orders needed by the
propagator closed forms: 0, 1/2, 1 (d = 1, 2, 3).
"""

from __future__ import annotations

import math

EULER_GAMMA = 0.5772156649015328606
SWITCHOVER = 12.0
_SERIES_TERMS = 40
_ASYMPTOTIC_TERMS = 8


def _j_series(nu: int, z: float) -> float:
    half = 0.5 * z
    q = half * half
    term = half ** nu / math.factorial(nu)
    total = term
    for k in range(1, _SERIES_TERMS):
        term *= -q / (k * (k + nu))
        total += term
    return total


def _harmonic(k: int) -> float:
    return sum(1.0 / i for i in range(1, k + 1))


def _y0_series(z: float) -> float:
    j0 = _j_series(0, z)
    q = 0.25 * z * z
    term = 1.0
    acc = 0.0
    for k in range(1, _SERIES_TERMS):
        term *= -q / (k * k)
        acc += -term * _harmonic(k)  # (-1)^{k+1} H_k q^k / (k!)^2
    return (2.0 / math.pi) * ((math.log(0.5 * z) + EULER_GAMMA) * j0 + acc)


def _y1_series(z: float) -> float:
    j1 = _j_series(1, z)
    q = 0.25 * z * z
    term = 0.5 * z  # (z/2)^{2k+1}/(k!(k+1)!) at k=0
    acc = term * (_harmonic(0) + _harmonic(1))
    for k in range(1, _SERIES_TERMS):
        term *= -q / (k * (k + 1))
        acc += term * (_harmonic(k) + _harmonic(k + 1))
    return (2.0 / math.pi) * (math.log(0.5 * z) + EULER_GAMMA) * j1 \
        - 2.0 / (math.pi * z) - acc / math.pi


def _asymptotic_pq(nu: float, z: float):
    mu = 4.0 * nu * nu
    p, q = 1.0, 0.0
    term = 1.0
    for k in range(1, _ASYMPTOTIC_TERMS):
        term *= (mu - (2 * k - 1) ** 2) / (k * 8.0 * z)
        if k % 2 == 1:
            q += term if (k // 2) % 2 == 0 else -term
        else:
            p += -term if (k // 2) % 2 == 1 else term
    return p, q


def _jy_asymptotic(nu: float, z: float):
    p, q = _asymptotic_pq(nu, z)
    omega = z - 0.5 * nu * math.pi - 0.25 * math.pi
    amp = math.sqrt(2.0 / (math.pi * z))
    j = amp * (p * math.cos(omega) - q * math.sin(omega))
    y = amp * (p * math.sin(omega) + q * math.cos(omega))
    return j, y


def besselj(nu, z: float) -> float:
    """J_nu(z) for nu in {0, 1/2, 1, 3/2}, z >= 0."""
    if z < 0:
        raise ValueError("negative argument")
    if nu == 0.5:
        return math.sqrt(2.0 / (math.pi * z)) * math.sin(z) if z > 0 else 0.0
    if nu == 1.5:
        if z == 0:
            return 0.0
        return math.sqrt(2.0 / (math.pi * z)) * (math.sin(z) / z - math.cos(z))
    nu = int(nu)
    if z == 0.0:
        return 1.0 if nu == 0 else 0.0
    if z < SWITCHOVER:
        return _j_series(nu, z)
    return _jy_asymptotic(nu, z)[0]


def bessely(nu, z: float) -> float:
    """Y_nu(z) for nu in {0, 1/2, 1}, z > 0."""
    if z <= 0:
        raise ValueError("Y needs z > 0")
    if nu == 0.5:
        return -math.sqrt(2.0 / (math.pi * z)) * math.cos(z)
    if z < SWITCHOVER:
        return _y0_series(z) if nu == 0 else _y1_series(z)
    return _jy_asymptotic(nu, z)[1]


def hankel2(nu, z: float) -> complex:
    """H^(2)_nu(z) = J_nu(z) - i Y_nu(z)."""
    return complex(besselj(nu, z), -bessely(nu, z))


def besselj_derivative(nu, z: float) -> float:
    """d/dz J_nu via the recurrence J'_nu = J_{nu-1} - (nu/z) J_nu."""
    if nu == 0:
        return -besselj(1, z)
    return besselj(nu - 1, z) - (nu / z) * besselj(nu, z)


def hankel2_derivative(nu, z: float) -> complex:
    if nu == 0:
        return -hankel2(1, z)
    return hankel2(nu - 1, z) - (nu / z) * hankel2(nu, z)
