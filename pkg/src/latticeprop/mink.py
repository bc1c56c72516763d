"""Polygonal Minkowski metrics on the integer lattice.

The metric d_n is the Minkowski gauge of the convex region spanned by the
unit points of primitive timelike lattice directions (hypotenuse <= n)
together with the null directions as recession rays.  Its value agrees with
the exact Minkowski length on every axis direction and is <= it elsewhere,
with the gap shrinking as n grows.

All halfspace data is exact (Fractions over integer inputs); float inputs
evaluate with a 1e-12 tolerance.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _core
from .errors import DegenerateNeighborhood, OutsideCone, SpacelikeInput

CATALAN = 0.9159655  # value used by the density law


@dataclass(frozen=True)
class LatticeVec:
    x: tuple
    t: int

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(int(c) for c in self.x))

    @property
    def d(self) -> int:
        return len(self.x)

    def __sub__(self, other: "LatticeVec") -> "LatticeVec":
        return LatticeVec(tuple(a - b for a, b in zip(self.x, other.x)), self.t - other.t)

    def __add__(self, other: "LatticeVec") -> "LatticeVec":
        return LatticeVec(tuple(a + b for a, b in zip(self.x, other.x)), self.t + other.t)

    def scale(self, k: int) -> "LatticeVec":
        return LatticeVec(tuple(k * c for c in self.x), k * self.t)

    def coords(self) -> tuple:
        return self.x + (self.t,)


@dataclass(frozen=True)
class SpacetimeVec:
    x: tuple
    t: float

    def coords(self) -> tuple:
        return tuple(self.x) + (self.t,)


@dataclass(frozen=True)
class AxisVector:
    step: LatticeVec
    length: int  # Minkowski length, exact

    def __post_init__(self):
        comps = self.step.coords() + (self.length,)
        g = 0
        for c in comps:
            g = gcd(g, abs(int(c)))
        assert g == 1, f"axis not primitive: {self}"

    @property
    def is_null(self) -> bool:
        return self.length == 0

    def unit_point(self) -> tuple:
        """Point on the d_n = 1 surface (timelike axes only), exact."""
        assert self.length > 0
        return tuple(Fraction(c, self.length) for c in self.step.coords())

    def sort_key(self):
        return (self.step.t,) + self.step.x


def minkowski_length(v):
    """sqrt(t^2 - sum x_i^2); exact int for perfect squares, float otherwise."""
    if isinstance(v, (LatticeVec, SpacetimeVec)):
        xs, t = v.x, v.t
    else:
        *xs, t = v
    s = t * t - sum(c * c for c in xs)
    if s < 0:
        raise SpacelikeInput(f"spacelike separation: t={t}, x={tuple(xs)}")
    if isinstance(s, int):
        r = isqrt(s)
        return r if r * r == s else math.sqrt(s)
    return math.sqrt(s)


@dataclass(frozen=True)
class HalfspaceNormal:
    v: AxisVector
    perp: tuple                      # exact Fraction components, d+1 of them
    neighborhood: tuple              # AxisVectors spanning the facet with v
    _denom: Fraction = Fraction(1)   # perp . anchor, > 0

    def value(self, coords: Sequence) -> Fraction:
        num = sum(p * c for p, c in zip(self.perp, coords))
        return num / self._denom

    def perp_unit(self) -> tuple:
        nrm = math.sqrt(float(sum(p * p for p in self.perp)))
        return tuple(float(p) / nrm for p in self.perp)


@dataclass
class AxisSet:
    d: int
    n: int
    axes: list = field(default_factory=list)    # timelike AxisVectors (length > 0)
    nulls: list = field(default_factory=list)   # null AxisVectors (length == 0)
    _halfspaces: Optional[list] = field(default=None, repr=False)

    @property
    def members(self) -> list:
        return self.axes + self.nulls

    def halfspaces(self) -> list:
        # built lazily: metric evaluation is desk-scale, axis enumeration is not
        if self._halfspaces is None:
            self._halfspaces = _supporting_halfspaces(self)
        return self._halfspaces

    def steps(self) -> list:
        """All member steps in deterministic order (time axis first)."""
        return [a.step for a in sorted(self.members, key=lambda a: a.sort_key())]


def _primitive(comps: Iterable) -> tuple:
    comps = tuple(int(c) for c in comps)
    g = 0
    for c in comps:
        g = gcd(g, abs(c))
    return tuple(c // g for c in comps) if g > 1 else comps


def generate_axes(d: int, n: int) -> AxisSet:
    """Enumerate primitive axis directions with hypotenuse <= n.

    Timelike members solve sum x_i^2 + I^2 = t^2 with I >= 1; null members
    solve sum x_i^2 = t^2.  Every direction keeps its gcd-reduced
    representative only.
    """
    assert d >= 1 and n >= 1
    timelike = {}
    nulls = {}
    if d == 1:
        for x, i, t in _core.pythagorean_triples(n):
            for sx in (int(x), -int(x)):
                key = (sx, int(t))
                timelike.setdefault(key, int(i))
        if n >= 1:
            timelike[(0, 1)] = 1
            nulls[(1, 1)] = 0
            nulls[(-1, 1)] = 0
    else:
        for t in range(1, n + 1):
            t2 = t * t
            for xs in _ball_points(d, t):
                s = sum(c * c for c in xs)
                rem = t2 - s
                if rem < 0:
                    continue
                i = isqrt(rem)
                if i * i != rem:
                    continue
                comps = xs + (t,)
                if i >= 1:
                    key = _primitive(comps + (i,))
                    timelike.setdefault(key[:-1], key[-1])
                elif s > 0:
                    nulls.setdefault(_primitive(comps), 0)
        timelike[(0,) * d + (1,)] = 1
    ax = [AxisVector(LatticeVec(k[:-1], k[-1]), i) for k, i in sorted(timelike.items())]
    nl = [AxisVector(LatticeVec(k[:-1], k[-1]), 0) for k in sorted(nulls)]
    return AxisSet(d=d, n=n, axes=ax, nulls=nl)


def _ball_points(d: int, t: int):
    rngs = [range(-t, t + 1)] * d
    return itertools.product(*rngs)


def _ray(a: AxisVector) -> tuple:
    """Representative ray direction (exact ints) for angular comparisons."""
    return a.step.coords()


def _angle_key(v: AxisVector, w: AxisVector) -> Fraction:
    """Monotone-in-angle exact key: signed squared cosine (descending)."""
    rv, rw = _ray(v), _ray(w)
    dot = sum(a * b for a, b in zip(rv, rw))
    n2 = sum(a * a for a in rv) * sum(b * b for b in rw)
    return Fraction(-dot * abs(dot), n2)


def _facet_direction(v: AxisVector, w: AxisVector, anchor: Optional[tuple]):
    """Direction contributed by w to the facet through v (exact Fractions)."""
    if w.is_null:
        return tuple(Fraction(c) for c in w.step.coords())
    p = w.unit_point()
    if anchor is None:
        return None
    return tuple(a - b for a, b in zip(p, anchor))


def _exact_rank(rows) -> int:
    m = [list(r) for r in rows]
    rank, ncols = 0, len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = m[rank][col]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                f = Fraction(m[r][col], inv)
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def _nullspace_1d(rows, dim: int) -> Optional[tuple]:
    """Exact 1-d nullspace of the row span (returns None if rank != dim-1)."""
    m = [list(map(Fraction, r)) for r in rows]
    cols = list(range(dim))
    rank = 0
    where = {}
    for col in cols:
        piv = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = m[rank][col]
        m[rank] = [a / inv for a in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        where[col] = rank
        rank += 1
    if rank != dim - 1:
        return None
    free = next(c for c in cols if c not in where)
    vec = [Fraction(0)] * dim
    vec[free] = Fraction(1)
    for col, r in where.items():
        vec[col] = -m[r][free]
    # clear denominators for tidy exact arithmetic
    den = 1
    for c in vec:
        den = den * c.denominator // gcd(den, c.denominator)
    out = tuple(Fraction(int(c * den)) for c in vec)
    return out


def neighborhood(v: AxisVector, axes: AxisSet) -> HalfspaceNormal:
    """Single-choice halfspace at v: the d nearest independent neighbors.

    Picks the d angularly-closest linearly independent members (lexicographic
    tie-break on step components), spans the facet directions (unit-point
    differences for timelike members, ray directions for null members), and
    returns the normal with its exact normalization denominator.
    """
    d = axes.d
    cands = [w for w in axes.members if w.step != v.step]
    cands.sort(key=lambda w: (_angle_key(v, w), w.sort_key()))
    anchor = v.unit_point() if not v.is_null else None
    dirs, chosen = [], []
    if v.is_null:
        dirs.append(tuple(Fraction(c) for c in v.step.coords()))
    for w in cands:
        if anchor is None:
            if w.is_null:
                continue  # need a timelike anchor first
            anchor = w.unit_point()
            chosen.append(w)
            if len(dirs) >= d:
                break
            continue
        dd = _facet_direction(v, w, anchor)
        if dd is None:
            continue
        if _exact_rank(dirs + [dd]) > len(dirs):
            dirs.append(dd)
            chosen.append(w)
        if len(dirs) >= d:
            break
    if len(dirs) < d or anchor is None:
        raise DegenerateNeighborhood(f"no {d} independent neighbors for {v}")
    perp = _nullspace_1d(dirs, d + 1)
    if perp is None:
        raise DegenerateNeighborhood(f"facet directions degenerate at {v}")
    denom = sum(p * a for p, a in zip(perp, anchor))
    if denom == 0:
        raise DegenerateNeighborhood(f"normal orthogonal to anchor at {v}")
    if denom < 0:
        perp = tuple(-p for p in perp)
        denom = -denom
    return HalfspaceNormal(v=v, perp=perp, neighborhood=tuple(chosen), _denom=denom)


def _supporting_halfspaces(axes: AxisSet) -> list:
    """Complete supporting-halfspace family for the unit region.

    For each member, hyperplanes through every d-subset of its nearest
    candidates are assembled exactly; only supporting ones (value >= 1 at all
    unit points, >= 0 along all null rays) are kept.  A single neighborhood
    per member misses facets as soon as d >= 2, hence the subset sweep.
    """
    d = axes.d
    members = axes.members
    seen, out = set(), []
    pool_size = max(2 * d + 4, d + 3)
    for v in members:
        cands = [w for w in members if w.step != v.step]
        cands.sort(key=lambda w: (_angle_key(v, w), w.sort_key()))
        pool = cands[: min(len(cands), pool_size)]
        for combo in itertools.combinations(pool, min(d, len(pool))):
            group = (v,) + combo
            anchor = next((w.unit_point() for w in group if not w.is_null), None)
            if anchor is None:
                continue
            dirs = []
            for w in group:
                if w.is_null:
                    dirs.append(tuple(Fraction(c) for c in w.step.coords()))
                else:
                    p = w.unit_point()
                    if p != anchor:
                        dirs.append(tuple(a - b for a, b in zip(p, anchor)))
            if _exact_rank(dirs) != d:
                continue
            perp = _nullspace_1d(dirs, d + 1)
            if perp is None:
                continue
            denom = sum(p * a for p, a in zip(perp, anchor))
            if denom == 0:
                continue
            if denom < 0:
                perp = tuple(-p for p in perp)
                denom = -denom
            key = tuple(Fraction(p, denom) for p in perp)
            if key in seen:
                continue
            if _supports(key, members):
                seen.add(key)
                out.append(HalfspaceNormal(v=v, perp=perp, neighborhood=combo, _denom=denom))
    return out


def _supports(scaled_perp, members) -> bool:
    for w in members:
        if w.is_null:
            val = sum(p * c for p, c in zip(scaled_perp, w.step.coords()))
            if val < 0:
                return False
        else:
            val = sum(p * c for p, c in zip(scaled_perp, w.unit_point()))
            if val < 1:
                return False
    return True


def polygonal_metric(x1, x2, axes: AxisSet):
    """d_n(x1, x2): min over the supporting halfspaces, exact on lattice input.

    Returns a Fraction for integer inputs (int-valued on axis multiples),
    float for continuum inputs.  Raises OutsideCone when the separation
    leaves the forward polygonal cone.
    """
    if isinstance(x1, LatticeVec):
        delta = (x2 - x1).coords()
        exact = True
    else:
        delta = tuple(b - a for a, b in zip(tuple(x1.x) + (x1.t,), tuple(x2.x) + (x2.t,)))
        exact = all(isinstance(c, int) for c in delta)
    if all(c == 0 for c in delta):
        return Fraction(0) if exact else 0.0
    vals = [h.value(delta) for h in axes.halfspaces()]
    if not vals:
        raise DegenerateNeighborhood("axis set carries no halfspaces")
    m = min(vals)
    if exact:
        if m < 0:
            raise OutsideCone(f"{delta} outside forward polygonal cone")
        return m
    mf = float(m)
    if mf < -1e-12:
        raise OutsideCone(f"{delta} outside forward polygonal cone")
    return max(mf, 0.0)


def in_polygonal_cone(x1, x2, axes: AxisSet) -> bool:
    try:
        polygonal_metric(x1, x2, axes)
        return True
    except OutsideCone:
        return False


def density_check(d: int, n: int):
    """(primitive quadruple count, predicted n^2/(32 G)) for d=2; count only otherwise."""
    if d == 2:
        count = _core.primitive_quadruple_count(n)
        return count, n * n / (32.0 * CATALAN)
    if d == 1:
        count = int(_core.pythagorean_triples(n).shape[0])
        return count, None
    axes = generate_axes(d, n)
    return len(axes.axes), None


def circle_positions(axes: AxisSet) -> np.ndarray:
    """Unit-circle/sphere positions (x/t, I/t) of the timelike axes.

    d=1: angle fraction in [0, 1) on the (x/t, I/t) circle arc.
    d>=2: the I/t coordinate mapped to its uniform band variable.
    """
    rows = []
    for a in axes.axes:
        t = a.step.t
        if axes.d == 1:
            ang = math.atan2(a.length / t, a.step.x[0] / t)
            rows.append((ang / math.pi) % 1.0)
        else:
            rows.append(0.5 * (1.0 + a.length / t))  # z uniform on sphere bands
    return np.array(sorted(rows))


def star_discrepancy(u: np.ndarray) -> float:
    """Star discrepancy of points in [0, 1]."""
    u = np.sort(np.asarray(u, dtype=float))
    n = len(u)
    if n == 0:
        return 1.0
    i = np.arange(1, n + 1)
    return float(max(np.max(np.abs(i / n - u)), np.max(np.abs(u - (i - 1) / n))))


def equidistribution_stats(axes: AxisSet, bins: int):
    """Angular histogram and star discrepancy of the timelike directions."""
    assert len(axes.axes) >= bins, "need at least one direction per bin"
    u = circle_positions(axes)
    hist, edges = np.histogram(u, bins=bins, range=(0.0, 1.0))
    return {
        "bins": bins,
        "histogram": hist.tolist(),
        "edges": edges.tolist(),
        "count": int(len(u)),
        "discrepancy": star_discrepancy(u),
    }
