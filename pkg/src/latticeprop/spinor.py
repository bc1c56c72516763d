"""Clifford algebra, rapidity-weighted fermionic path sums, and the closed
Dirac relations.

Sign conventions (fixed once, verified by the relation checks): with the
library's F|_I^m = int e^{+imI} transform, the fermionic density is
#f = i (gamma^mu d_mu + d_I) #b = i (d-2) (gamma^mu x_mu - 1 I) (t^2-x^2-I^2)^((d-4)/2),
and the frame-vector pairing embeds the radial direction as (t, x, -I).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import (BudgetExceeded, DimensionMismatch, NearLightcone,
                     NullOrSpacelike, NullStep)
from .mink import AxisSet, LatticeVec
from . import bessel
from .propagator import kg_closed_form

_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True)
class GammaBasis:
    d: int
    matrices: tuple  # d+1 complex square arrays, signature (+,-,...,-)

    def __post_init__(self):
        n = self.matrices[0].shape[0]
        eye = np.eye(n)
        for mu, gmu in enumerate(self.matrices):
            for nu, gnu in enumerate(self.matrices):
                anti = gmu @ gnu + gnu @ gmu
                want = 2.0 * eye * _metric(mu, nu)
                assert np.allclose(anti, want, atol=1e-12), \
                    f"Clifford relation fails at ({mu}, {nu})"

    @property
    def dim(self) -> int:
        return self.matrices[0].shape[0]


def _metric(mu: int, nu: int) -> float:
    if mu != nu:
        return 0.0
    return 1.0 if mu == 0 else -1.0


def gamma_basis(d: int) -> GammaBasis:
    """Smallest faithful representation per spatial dimension."""
    if d == 1:
        mats = (_SX, 1j * _SY)
    elif d == 2:
        mats = (_SX, 1j * _SY, 1j * _SZ)
    elif d == 3:
        zero = np.zeros((2, 2), dtype=complex)
        eye = np.eye(2, dtype=complex)
        g0 = np.block([[eye, zero], [zero, -eye]])
        mats = (g0,) + tuple(
            np.block([[zero, s], [-s, zero]]) for s in (_SX, _SY, _SZ))
    else:
        raise DimensionMismatch(f"no built-in representation for d = {d}")
    return GammaBasis(d=d, matrices=tuple(np.asarray(m, dtype=complex) for m in mats))


@dataclass(frozen=True)
class SpinorPair:
    v: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        assert np.linalg.norm(self.v) > 0 and np.linalg.norm(self.w) > 0


@dataclass(frozen=True)
class FrameVector:
    components: tuple  # (V^0, V^1..V^d, V_I), complex

    @property
    def d(self) -> int:
        return len(self.components) - 2


def frame_vector(p: SpinorPair, g: GammaBasis) -> FrameVector:
    """(v^dag gamma^mu w) e_mu - (v^dag w) I-hat."""
    if p.v.shape[0] != g.dim or p.w.shape[0] != g.dim:
        raise DimensionMismatch("spinor length does not match the representation")
    comps = [complex(p.v.conj() @ gm @ p.w) for gm in g.matrices]
    comps.append(-complex(p.v.conj() @ p.w))
    return FrameVector(tuple(comps))


def _mink_dp(a: Sequence[complex], b: Sequence[complex]) -> complex:
    """(d+2)-Minkowski pairing: + time, - space, - I."""
    return a[0] * b[0] - sum(x * y for x, y in zip(a[1:], b[1:]))


def _embed_step(step: LatticeVec, length) -> tuple:
    # radial embedding carries -I (the sign that makes the cosh
    # factorization exact; see module docstring)
    return (step.t,) + step.x + (-length,)


def rapidity(prev, cur, frame: Optional[FrameVector] = None,
             metric_length=None):
    """arccosh of the normalized Minkowski inner product.

    Step pairs use the (d+1)-form and return a nonnegative real; the frame
    branch pairs the (d+2)-dim frame vector against the step embedded with
    its length, normalizing the step by its polygonal length and the frame
    by the (d+2) Minkowski form (complex in general, Re >= 0).
    """
    if frame is not None:
        step, length = cur
        a = _embed_step(step, length)
        if length == 0:
            raise NullOrSpacelike("frame rapidity of a null step")
        nf = cmath.sqrt(_mink_dp(frame.components, frame.components))
        if nf == 0:
            raise NullOrSpacelike("frame vector has null normalization")
        val = _mink_dp(frame.components, a) / (nf * length)
        eta = _acosh(val)
        return eta
    ta, xa = prev.t, prev.x
    tb, xb = cur.t, cur.x
    dot = ta * tb - sum(p * q for p, q in zip(xa, xb))
    na = ta * ta - sum(c * c for c in xa)
    nb = tb * tb - sum(c * c for c in xb)
    if na <= 0 or nb <= 0:
        raise NullOrSpacelike("rapidity needs timelike vectors")
    return math.acosh(max(1.0, dot / math.sqrt(na * nb)))


def _acosh(z) -> complex:
    out = cmath.acosh(complex(z))
    if out.real < 0:
        out = -out
    return out


def fermion_path_weight(path, m: float, frame: FrameVector,
                        lengths: Optional[Sequence[int]] = None) -> complex:
    """e^{i m rho} e^{-sum eta} over a timelike canonical path.

    Raises NullStep for zero-length steps (their rapidity diverges).
    """
    steps = path.steps()
    if lengths is None:
        from .mink import minkowski_length
        lengths = [minkowski_length(s) for s in steps]
    if any(L == 0 for L in lengths):
        raise NullStep("fermionic weights exclude null steps")
    rho = sum(lengths)
    eta_total = rapidity(None, (steps[0], lengths[0]), frame=frame) if steps else 0.0
    for a, b in zip(steps, steps[1:]):
        eta_total += rapidity(a, b)
    return cmath.exp(1j * m * rho) * cmath.exp(-eta_total)


def discrete_fermion_propagator(x: LatticeVec, y: LatticeVec, m: float,
                                p: SpinorPair, axes: AxisSet,
                                g: Optional[GammaBasis] = None,
                                budget: int = 2_000_000) -> complex:
    """Sum of fermionic weights over timelike canonical paths x -> y."""
    if g is None:
        g = gamma_basis(axes.d)
    frame = frame_vector(p, g)
    timelike = sorted((a for a in axes.axes), key=lambda a: a.sort_key())
    target = y - x
    total = 0j
    nodes = 0

    def dfs(dx, dt, rev_steps):
        nonlocal total, nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"over {budget} nodes")
        if dt == 0:
            if all(c == 0 for c in dx) and rev_steps:
                from .pathspace import LatticePath
                pts = [x]
                for a in rev_steps:
                    pts.append(pts[-1] + a.step)
                pathw = fermion_path_weight(
                    LatticePath(tuple(pts)), m, frame,
                    lengths=[a.length for a in rev_steps])
                total += pathw
            return
        for a in timelike:
            if a.step.t > dt:
                continue
            ndx = tuple(c - s for c, s in zip(dx, a.step.x))
            ndt = dt - a.step.t
            if any(abs(c) > ndt for c in ndx):
                continue
            rev_steps.append(a)
            dfs(ndx, ndt, rev_steps)
            rev_steps.pop()

    if target.t == 0 and all(c == 0 for c in target.x):
        return 1.0 + 0j
    dfs(target.x, target.t, [])
    return total


def fermion_path_rapidities(x: LatticeVec, y: LatticeVec, p: SpinorPair,
                            axes: AxisSet, g: Optional[GammaBasis] = None,
                            budget: int = 2_000_000) -> list:
    """Total accumulated Re(eta) per timelike path, for diagnostics."""
    if g is None:
        g = gamma_basis(axes.d)
    frame = frame_vector(p, g)
    timelike = sorted(axes.axes, key=lambda a: a.sort_key())
    out = []
    nodes = 0

    def dfs(dx, dt, seq):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"over {budget} nodes")
        if dt == 0:
            if all(c == 0 for c in dx) and seq:
                eta = rapidity(None, (seq[0].step, seq[0].length), frame=frame)
                total = complex(eta).real
                for a, b in zip(seq, seq[1:]):
                    total += rapidity(a.step, b.step)
                out.append(total)
            return
        for a in timelike:
            if a.step.t > dt:
                continue
            ndx = tuple(c - s for c, s in zip(dx, a.step.x))
            if any(abs(c) > dt - a.step.t for c in ndx):
                continue
            seq.append(a)
            dfs(ndx, dt - a.step.t, seq)
            seq.pop()

    target = y - x
    if not (target.t == 0 and all(c == 0 for c in target.x)):
        dfs(target.x, target.t, [])
    return out


def bosonic_density(t: float, x, I: float, d: int) -> float:
    """#b = (t^2 - sum x^2 - I^2)^((d-2)/2) on its support."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    u = t * t - float(xs @ xs) - I * I
    if u <= 0:
        return 0.0
    return u ** ((d - 2) / 2)


def fermion_density_closed(t: float, x, I: float, d: int, g: GammaBasis) -> np.ndarray:
    """#f = i (d-2) (gamma^mu x_mu - 1 I) (t^2 - x^2 - I^2)^((d-4)/2)."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    u = t * t - float(xs @ xs) - I * I
    nmat = g.dim
    if u <= 0:
        return np.zeros((nmat, nmat), dtype=complex)
    slash = g.matrices[0] * t
    for xi, gi in zip(xs, g.matrices[1:]):
        slash = slash - gi * xi
    return 1j * (d - 2) * (slash - I * np.eye(nmat)) * u ** ((d - 4) / 2)


def dirac_relation_check(d: int = 3, step: float = 1e-4,
                         grid=None, g: Optional[GammaBasis] = None) -> float:
    """Max relative error of #f vs i(gamma^mu d_mu + d_I)#b by central FD."""
    if g is None:
        g = gamma_basis(d)
    if grid is None:
        grid = [(2.0, (0.3, -0.2, 0.1)[:d], 0.4),
                (2.5, (0.5, 0.1, -0.3)[:d], -0.6),
                (3.0, (-0.7, 0.4, 0.2)[:d], 0.9),
                (2.2, (0.0,) * d, 0.0)]
    worst = 0.0
    eye = np.eye(g.dim)
    for t, xs, I in grid:
        xs = tuple(xs)

        def b(tt, xx, ii):
            return bosonic_density(tt, xx, ii, d)

        dt = (b(t + step, xs, I) - b(t - step, xs, I)) / (2 * step)
        dI = (b(t, xs, I + step) - b(t, xs, I - step)) / (2 * step)
        fd = g.matrices[0] * dt
        for k in range(d):
            xp = list(xs); xp[k] += step
            xm = list(xs); xm[k] -= step
            dk = (b(t, xp, I) - b(t, xm, I)) / (2 * step)
            fd = fd + g.matrices[k + 1] * dk
        fd = 1j * (fd + dI * eye)
        closed = fermion_density_closed(t, xs, I, d, g)
        scale = np.max(np.abs(closed))
        if scale == 0:
            continue
        worst = max(worst, float(np.max(np.abs(fd - closed)) / scale))
    return worst


def cosh_factorization_residual(t: float, x, I: float, d: int,
                                pairs: int = 200, seed: int = 11) -> float:
    """1 - |corr| between v^dag #f w and cosh(eta_V) over random spinor pairs.

    One global constant absorbs the scalar density factors; exactness is the
    content of the cosh factorization of the closed fermionic density.
    """
    g = gamma_basis(d)
    rng = np.random.default_rng(seed)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    radial = (t,) + tuple(xs) + (-I,)
    nr = cmath.sqrt(_mink_dp(radial, radial))
    lhs, rhs = [], []
    for _ in range(pairs):
        v = rng.normal(size=g.dim) + 1j * rng.normal(size=g.dim)
        w = rng.normal(size=g.dim) + 1j * rng.normal(size=g.dim)
        fv = frame_vector(SpinorPair(v, w), g).components
        nf = cmath.sqrt(_mink_dp(fv, fv))
        if abs(nf) < 1e-9:
            continue
        cosh_eta = _mink_dp(fv, radial) / (nf * nr)
        dens = complex(v.conj() @ fermion_density_closed(t, xs, I, d, g) @ w)
        lhs.append(dens / nf)
        rhs.append(cosh_eta)
    lhs = np.asarray(lhs)
    rhs = np.asarray(rhs)
    corr = abs(np.vdot(rhs, lhs)) / (np.linalg.norm(rhs) * np.linalg.norm(lhs))
    return 1.0 - float(corr)


def curved_fermion_spectrum_exploratory(orbit, m: float) -> complex:
    """Exploratory orbit-sum fermionic estimator (excluded from acceptance).

    Each in-cone lift contributes both rapidity branches against a
    tau-based orientation angle eta' = arccosh(dt / tau) (the boost of the
    lift relative to the pure-time direction); the lift's length profile is
    the rect of width tau.  The orientation convention between deck images
    is not canonical; this fixes one choice for exploration only.
    """
    total = 0j
    count = 0
    for (t, x, y), tau in zip(orbit.points, orbit.taus):
        if tau <= 0:
            continue
        count += 1
        eta = math.acosh(max(1.0, t / tau))
        u = 0.5 * m * tau
        sinc = math.sin(u) / u if u else 1.0
        total += (math.exp(eta) + math.exp(-eta)) * tau * sinc
    if count == 0:
        raise NullOrSpacelike("no in-cone lift")
    return total / count


def dirac_closed_form(tau: float, m: float, d: int,
                      g: Optional[GammaBasis] = None) -> np.ndarray:
    """(i gamma^mu d_mu - m) applied to the KG form, at the pure-time point.

    At x = 0 the spatial derivatives vanish and d_t f(tau) = f'(tau), so the
    value is i f'(tau) gamma^0 - m f(tau), with f' via dH_nu = H_{nu-1} -
    (nu/z) H_nu.  Reported up to the same undetermined constant as
    kg_closed_form.
    """
    if g is None:
        g = gamma_basis(d)
    if tau <= 1e-9:
        raise NearLightcone(f"tau = {tau}")
    nu = (d - 1) / 2
    f = kg_closed_form(tau, m, d)
    fprime = m ** nu * bessel.hankel2_derivative(nu, m * tau) * m
    eye = np.eye(g.dim)
    return 1j * fprime * g.matrices[0] - m * f * eye
