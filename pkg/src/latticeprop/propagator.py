"""Scalar propagators: discrete length spectra, Fourier transforms, and the
Klein-Gordon closed forms they converge to.

Fourier convention throughout: F|_I^m f = int e^{+imI} f(I) dI, inverse
(1/2pi) int e^{-imI}.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import integrate

from . import bessel
from .contmult import ContMultArgs, TruncationPolicy, continuous_multinomial
from .errors import NearLightcone, QuadratureFailure
from .mink import AxisSet, LatticeVec
from .pathspace import PathConstraints, orderings_count, step_solutions


@dataclass(frozen=True)
class LengthSpectrum:
    entries: tuple  # ((I, count), ...) sorted by I; counts are exact ints

    @staticmethod
    def from_dict(d) -> "LengthSpectrum":
        return LengthSpectrum(tuple(sorted((int(k), v) for k, v in d.items() if v)))

    def as_dict(self) -> dict:
        return dict(self.entries)

    def total(self):
        return sum(c for _, c in self.entries)

    def transform(self, m: float) -> complex:
        return sum(cnt * cmath.exp(1j * m * I) for I, cnt in self.entries)


@dataclass(frozen=True)
class PropagatorRequest:
    d: int
    n: int
    m: float
    source: LatticeVec
    target: LatticeVec
    variant: str = "standard"  # or "feynman"

    def __post_init__(self):
        assert self.variant in ("standard", "feynman")
        assert self.m >= 0


def length_spectrum(x: LatticeVec, y: LatticeVec, axes: AxisSet) -> LengthSpectrum:
    """N(I) from the constrained multinomial sum over step multisets."""
    spec = {}
    for sol in step_solutions(PathConstraints(displacement=y - x), axes):
        I = sol.total_length()
        spec[I] = spec.get(I, 0) + orderings_count(sol)
    return LengthSpectrum.from_dict(spec)


def signed_length_spectrum(x: LatticeVec, y: LatticeVec, axes: AxisSet) -> dict:
    """Feynman variant: each positive-length step contributes +/- its length.

    Returns {signed I: count}; zero-length steps carry a single sign choice.
    """
    spec = {}
    for sol in step_solutions(PathConstraints(displacement=y - x), axes):
        base = orderings_count(sol)
        poly = {0: base}
        for axis, cnt in sol.counts:
            if axis.length == 0:
                continue
            for _ in range(cnt):
                nxt = {}
                for s, c in poly.items():
                    for dI in (axis.length, -axis.length):
                        nxt[s + dI] = nxt.get(s + dI, 0) + c
                poly = nxt
        for s, c in poly.items():
            spec[s] = spec.get(s, 0) + c
    return spec


def discrete_propagator(req: PropagatorRequest, axes: Optional[AxisSet] = None) -> complex:
    """sum_I N(I) e^{imI} (standard) or the signed-spectrum sum (feynman)."""
    from .mink import generate_axes
    if axes is None:
        axes = generate_axes(req.d, req.n)
    if req.variant == "standard":
        return length_spectrum(req.source, req.target, axes).transform(req.m)
    spec = signed_length_spectrum(req.source, req.target, axes)
    return sum(c * cmath.exp(1j * req.m * I) for I, c in spec.items())


def continuum_density(xvec, I: float, t: float, d: int) -> float:
    """(1 - (sum x^2 + I^2)/t^2)^((d-2)/2) on its support, 0 outside.

    d=2 is the indicator profile; d=1 has an integrable inverse-sqrt
    boundary singularity (returns inf exactly on the boundary).
    """
    assert t > 0
    xs = np.atleast_1d(np.asarray(xvec, dtype=float))
    u = 1.0 - (float(np.dot(xs, xs)) + I * I) / (t * t)
    if u < 0:
        return 0.0
    if u == 0.0:
        return 1.0 if d == 2 else (0.0 if d > 2 else math.inf)
    return u ** ((d - 2) / 2)


def density_fourier(tau: float, m: float, d: int) -> float:
    """F|_I^m of the radial density (tau^2 - I^2)^((d-2)/2), closed form.

    d=1: pi J0(m tau); d=2: 2 sin(m tau)/m; d=3: pi tau J1(m tau)/m.
    """
    z = m * tau
    if d == 1:
        return math.pi * bessel.besselj(0, z)
    if d == 2:
        return 2.0 * tau if m == 0 else 2.0 * math.sin(z) / m
    if d == 3:
        if m == 0:
            return 0.5 * math.pi * tau * tau
        return math.pi * tau * bessel.besselj(1, z) / m
    raise ValueError("closed forms cover d in {1, 2, 3}")


def density_fourier_quadrature(tau: float, m: float, d: int,
                               normalized: bool = False) -> float:
    """Adaptive-quadrature oracle for density_fourier (sin substitution at d=1).

    normalized=True transforms the unit-height profile (1 - I^2/tau^2)^((d-2)/2),
    i.e. continuum_density on the pure-time slice, instead of the raw radial
    density (tau^2 - I^2)^((d-2)/2).
    """
    if d == 1:
        f = lambda th: math.cos(m * tau * math.sin(th))
        val, err = integrate.quad(f, -math.pi / 2, math.pi / 2, epsabs=1e-12, epsrel=1e-12)
    else:
        f = lambda I: math.cos(m * I) * (tau * tau - I * I) ** ((d - 2) / 2)
        val, err = integrate.quad(f, -tau, tau, epsabs=1e-12, epsrel=1e-12)
    if err > 1e-6:
        raise QuadratureFailure(f"quadrature error {err}")
    if normalized and d != 1:
        val /= tau ** (d - 2)
    return val


def kg_closed_form(tau: float, m: float, d: int, lightcone_tol: float = 1e-9) -> complex:
    """m^((d-1)/2) H^(2)_((d-1)/2)(m tau), up to the undetermined constant.

    The constant (fit factor) is reported separately by fit_constant; the
    FT of the real desk-scale density matches the J-component.
    """
    if tau <= lightcone_tol:
        raise NearLightcone(f"tau = {tau} within {lightcone_tol} of the cone")
    assert m > 0 and d >= 1
    nu = (d - 1) / 2
    return m ** nu * bessel.hankel2(nu, m * tau)


def fit_constant(values: np.ndarray, shape: np.ndarray) -> complex:
    """Least-squares scalar alpha minimizing |values - alpha shape|."""
    shape = np.asarray(shape)
    values = np.asarray(values)
    denom = np.vdot(shape, shape)
    if denom == 0:
        raise ValueError("degenerate shape")
    return complex(np.vdot(shape, values) / denom)


# --- small-scale continuum propagator (d = 1) ------------------------------

def _free_axis_split(dx: int, dt: float, I: float):
    """n=1 substitutions: counts of the time axis and the two null axes."""
    return I, (dt + dx - I) / 2.0, (dt - dx - I) / 2.0


def continuum_length_density(x: float, t: float, I: float, n: int = 1,
                             mc: int = 20000, seed: int = 0,
                             pol: TruncationPolicy = TruncationPolicy()) -> float:
    """Volume density of d=1 continuum paths (0,0) -> (x,t) at length I.

    n=1 (and n=3, same axis set) is the exact three-argument continuous
    multinomial at the constraint substitutions; larger n Monte Carlo
    integrates the free axis multiplicities over their caps.
    """
    if t <= 0:
        return 0.0
    a, b, c = _free_axis_split(x, t, I)
    if n <= 3:
        if min(a, b, c) < 0:
            return 0.0
        if min(a, b, c) == 0:
            return 0.0
        return continuous_multinomial(ContMultArgs((a, b, c)), pol)
    from .mink import generate_axes
    axes = generate_axes(1, n)
    free = [ax for ax in axes.axes if ax.step.x[0] != 0]
    rng = np.random.default_rng(seed)
    total = 0.0
    for _ in range(mc):
        rem_x, rem_t, rem_I = float(x), float(t), float(I)
        amounts = []
        ok = True
        for ax in free:
            cap = min(rem_t / ax.step.t,
                      (rem_I / ax.length) if ax.length else math.inf)
            if cap <= 0:
                ok = False
                break
            u = rng.uniform(0.0, cap)
            amounts.append(u)
            rem_x -= u * ax.step.x[0]
            rem_t -= u * ax.step.t
            rem_I -= u * ax.length
        if not ok:
            continue
        aa, bb, cc = _free_axis_split(rem_x, rem_t, rem_I)
        if min(aa, bb, cc) <= 0:
            continue
        args = tuple(amounts) + (aa, bb, cc)
        total += continuous_multinomial(ContMultArgs(args), pol)
    # box volume of the sampled caps is path dependent; report the plain mean
    return total / mc


def continuum_propagator_small(x: float, t: float, m: float, n: int = 1,
                               mc: int = 20000, grid_points: int = 64,
                               seed: int = 0):
    """Grid Fourier transform of the d=1 continuum length density.

    Returns (value, standard_error_estimate).  Desk scale: the density is
    supported on [0, t - |x|] for the n <= 3 axis set.
    """
    upper = t - abs(x)
    if upper <= 0:
        return 0j, 0.0
    Is = np.linspace(0.0, upper, grid_points + 1)
    dens = np.array([continuum_length_density(x, t, I, n=n, mc=mc, seed=seed + k)
                     for k, I in enumerate(Is)])
    phase = np.exp(1j * m * Is)
    val = complex(np.trapezoid(dens * phase, Is))
    se = 0.0 if n <= 3 else float(np.std(dens) / math.sqrt(max(mc, 1)) * upper)
    return val, se
